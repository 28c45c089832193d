import init, { default_scenario, distance_sweep, elevation_sweep, max_range } from "./pkg/fsolink_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
let op = "distance";

const operations = {
  distance: {
    run: (s) => distance_sweep(s, num("d-start"), num("d-stop"), num("d-points"), num("d-margin")),
    series: (rows) => [{
      name: "P_T (dBm)",
      points: rows.map((r) => [r.distance_km, 30 + 10 * Math.log10(r.tx_power.watts)]),
    }],
    axes: ["distance (km)", "required P_T (dBm)"],
  },
  elevation: {
    run: (s) => elevation_sweep(s, num("e-alt"), num("e-min"), num("e-margin")),
    series: (rows) => [
      { name: "P_T (dBm)", points: rows.map((r) => [r.elevation_deg, 30 + 10 * Math.log10(r.tx_power.watts)]) },
      { name: "L_A (dB)", points: rows.map((r) => [r.elevation_deg, r.atmospheric_db]) },
    ],
    axes: ["elevation (deg)", "dBm / dB"],
  },
  range: {
    run: (s) => max_range(s, num("r-power"), num("r-margin")),
    series: (rows) => ["inter-satellite", "up-down"]
      .map((link) => ({
        name: `${link} d_max (km)`,
        points: rows
          .filter((r) => r.link === link && r.max_distance_km !== null)
          .map((r) => [r.margin_floor_db, r.max_distance_km]),
      }))
      .filter((s) => s.points.length > 0),
    axes: ["margin floor (dB)", "maximum distance (km)"],
  },
};

const colors = ["#1f5fa8", "#c2410c", "#15803d"];

function niceTicks(lo, hi, count) {
  const span = hi - lo || Math.abs(hi) || 1;
  const raw = span / count;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw);
  const ticks = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) ticks.push(+t.toPrecision(12));
  return ticks;
}

function plot(series, [xLabel, yLabel]) {
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = { l: 110, r: 30, t: 30, b: 80 };
  ctx.clearRect(0, 0, W, H);
  const all = series.flatMap((s) => s.points);
  if (all.length === 0) return;
  let [x0, x1] = [Math.min(...all.map((p) => p[0])), Math.max(...all.map((p) => p[0]))];
  let [y0, y1] = [Math.min(...all.map((p) => p[1])), Math.max(...all.map((p) => p[1]))];
  if (x0 === x1) { x0 -= 1; x1 += 1; }
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const X = (x) => pad.l + ((x - x0) / (x1 - x0)) * (W - pad.l - pad.r);
  const Y = (y) => H - pad.b - ((y - y0) / (y1 - y0)) * (H - pad.t - pad.b);

  ctx.font = "22px system-ui, sans-serif";
  ctx.strokeStyle = "#ddd";
  ctx.fillStyle = "#444";
  ctx.textAlign = "center";
  for (const t of niceTicks(x0, x1, 8)) {
    ctx.beginPath(); ctx.moveTo(X(t), pad.t); ctx.lineTo(X(t), H - pad.b); ctx.stroke();
    ctx.fillText(String(t), X(t), H - pad.b + 28);
  }
  ctx.textAlign = "right";
  for (const t of niceTicks(y0, y1, 6)) {
    ctx.beginPath(); ctx.moveTo(pad.l, Y(t)); ctx.lineTo(W - pad.r, Y(t)); ctx.stroke();
    ctx.fillText(String(t), pad.l - 10, Y(t) + 7);
  }
  ctx.textAlign = "center";
  ctx.fillText(xLabel, (pad.l + W - pad.r) / 2, H - 20);
  ctx.save();
  ctx.translate(28, (pad.t + H - pad.b) / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(yLabel, 0, 0);
  ctx.restore();

  series.forEach((s, i) => {
    ctx.strokeStyle = ctx.fillStyle = colors[i % colors.length];
    ctx.lineWidth = 3;
    ctx.beginPath();
    s.points.forEach(([x, y], j) => (j ? ctx.lineTo(X(x), Y(y)) : ctx.moveTo(X(x), Y(y))));
    ctx.stroke();
    ctx.textAlign = "left";
    ctx.fillRect(pad.l + 20, pad.t + 10 + i * 30, 24, 4);
    ctx.fillText(s.name, pad.l + 52, pad.t + 20 + i * 30);
  });
}

function update() {
  const o = operations[op];
  try {
    const result = JSON.parse(o.run($("scenario").value));
    $("error").textContent = "";
    $("table").textContent = result.table;
    plot(o.series(result.rows), o.axes);
  } catch (e) {
    $("error").textContent = String(e);
  }
}

function select(next) {
  op = next;
  for (const b of document.querySelectorAll("nav button")) b.setAttribute("aria-pressed", String(b.dataset.op === op));
  for (const f of document.querySelectorAll("fieldset")) f.hidden = f.dataset.for !== op;
  update();
}

await init();
$("scenario").value = default_scenario();
$("reset").addEventListener("click", () => { $("scenario").value = default_scenario(); update(); });
$("scenario").addEventListener("input", update);
for (const input of document.querySelectorAll("fieldset input")) input.addEventListener("input", update);
for (const b of document.querySelectorAll("nav button")) b.addEventListener("click", () => select(b.dataset.op));
update();
