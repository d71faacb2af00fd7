import init, { catalog, envelope, tiles, heatmap, minimize_trace } from "./pkg/lipbound_demo.js";

const $ = (id) => document.getElementById(id);

function call(errId, f) {
  $(errId).textContent = "";
  try {
    return JSON.parse(f());
  } catch (e) {
    $(errId).textContent = String(e);
    return null;
  }
}

function scaler(lo, hi, a, b) {
  const span = hi - lo || 1;
  return (v) => a + ((v - lo) / span) * (b - a);
}

const COLORS = {
  general: "#d62728",
  symmetric: "#1f77b4",
  norm: "#2ca02c",
};

function drawEnvelope() {
  const fn = $("env-fn").value.trim();
  const bx = $("env-box").value.trim();
  const info = fnBox(fn, bx);
  if (!info) return;
  const [lo, hi] = info[0];
  const anchor = lo + (hi - lo) * Number($("env-anchor").value);
  const data = call("env-err", () => envelope(fn, bx, anchor, 400));
  if (!data) return;
  const cv = $("env");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const show = (id) => (id.startsWith("quadratic") ? $("env-quad").checked : $("env-lin").checked);
  const curves = data.curves.filter((c) => show(c.id));
  let ymin = Math.min(...data.f), ymax = Math.max(...data.f);
  const spread = ymax - ymin || 1;
  ymin -= spread; ymax += spread;
  const sx = scaler(data.xs[0], data.xs[data.xs.length - 1], 40, cv.width - 10);
  const sy = scaler(ymin, ymax, cv.height - 20, 10);
  const line = (ys, color, dash) => {
    ctx.strokeStyle = color;
    ctx.setLineDash(dash);
    ctx.beginPath();
    data.xs.forEach((x, k) => {
      const y = Math.max(ymin, Math.min(ymax, ys[k]));
      k ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y));
    });
    ctx.stroke();
  };
  for (const c of curves) {
    const form = c.id.split("_")[1];
    line(c.values, COLORS[form], c.id.startsWith("linear") ? [6, 4] : []);
  }
  ctx.lineWidth = 2;
  line(data.f, "#000", []);
  ctx.lineWidth = 1;
  ctx.setLineDash([]);
  ctx.fillStyle = "#000";
  ctx.beginPath();
  ctx.arc(sx(data.anchor), sy(data.f_anchor), 4, 0, 2 * Math.PI);
  ctx.fill();
  $("env-legend").innerHTML =
    `<span>black: f</span><span style="color:${COLORS.general}">general</span>` +
    `<span style="color:${COLORS.symmetric}">symmetric</span><span style="color:${COLORS.norm}">norm</span>` +
    `<span>dashed: linear, solid: quadratic</span><span>constants: ${data.provenance}</span>`;
}

function shade(t) {
  const v = Math.round(255 * (1 - Math.max(0, Math.min(1, t))));
  return `rgb(${v},${v},255)`;
}

function drawTiles() {
  const fn = $("tile-fn").value.trim();
  const bx = $("tile-box").value.trim();
  const data = call("tile-err", () => tiles(fn, bx, Number($("tile-depth").value)));
  if (!data) return;
  const res = 96;
  const heat = call("tile-err", () => heatmap(fn, bx, res));
  if (!heat) return;
  const flavor = $("tile-flavor").value;
  const cv = $("tiles");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const side = Math.min(cv.height, cv.width / 2 - 10);
  const lows = data.tiles.map((t) => t[flavor][0]);
  const lo = Math.min(...lows, ...heat.values), hi = Math.max(...heat.values);
  const tone = (v) => shade((v - lo) / (hi - lo || 1));
  // left: f on a grid, right: certified lower bound per tile, same colour scale
  const cell = side / res;
  heat.values.forEach((v, k) => {
    const row = Math.floor(k / res), col = k % res;
    ctx.fillStyle = tone(v);
    ctx.fillRect(col * cell, side - (row + 1) * cell, cell + 0.5, cell + 0.5);
  });
  const [[x0, x1], [y0, y1]] = data.box;
  const off = cv.width - side;
  const sx = scaler(x0, x1, off, off + side);
  const sy = scaler(y0, y1, side, 0);
  for (const t of data.tiles) {
    const [[a0, a1], [b0, b1]] = t.box;
    const x = sx(a0), y = sy(b1), w = sx(a1) - sx(a0), h = sy(b0) - sy(b1);
    ctx.fillStyle = tone(t[flavor][0]);
    ctx.fillRect(x, y, w, h);
    ctx.strokeStyle = "#999";
    ctx.strokeRect(x, y, w, h);
  }
  const gap = data.tiles.reduce((m, t) => Math.max(m, t.sampled[0] - t[flavor][0]), 0);
  $("tile-info").textContent =
    `${data.tiles.length} tiles, largest gap between sampled minimum and lower bound ${gap.toExponential(3)} ` +
    `(constants: ${data.provenance})`;
}

function drawBnb() {
  const fn = $("bnb-fn").value.trim();
  const bx = $("bnb-box").value.trim();
  const data = call("bnb-err", () =>
    minimize_trace(fn, bx, Number($("bnb-tol").value), Number($("bnb-budget").value)));
  if (!data) return;
  const cv = $("bnb");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const tr = data.trace;
  if (tr.length > 0) {
    const inc = tr.map((r) => r.incumbent), low = tr.map((r) => r.certified_lower);
    const sx = scaler(0, tr[tr.length - 1].iteration, 40, cv.width - 10);
    const sy = scaler(Math.min(...low), Math.max(...inc), cv.height - 20, 10);
    const line = (key, color) => {
      ctx.strokeStyle = color;
      ctx.beginPath();
      tr.forEach((r, k) => (k ? ctx.lineTo(sx(r.iteration), sy(r[key])) : ctx.moveTo(sx(r.iteration), sy(r[key]))));
      ctx.stroke();
    };
    line("incumbent", "#d62728");
    line("certified_lower", "#1f77b4");
  }
  $("bnb-out").textContent =
    `best ${data.best_value} at [${data.best_point.join(", ")}]\n` +
    `certified lower ${data.certified_lower}, gap ${Number(data.gap).toExponential(3)}\n` +
    `${data.iterations} iterations, ${data.boxes_pruned} boxes pruned, ` +
    `${data.converged ? "converged" : "budget exhausted"} (constants: ${data.provenance})\n` +
    `red: incumbent, blue: certified lower bound`;
}

let entries = [];

function fnBox(fn, bx) {
  if (bx) {
    return bx.split(",").map((a) => a.split(":").map(Number));
  }
  const e = entries.find((e) => e.name === fn);
  if (!e) {
    $("env-err").textContent = "expressions need a box";
    return null;
  }
  return e.box;
}

await init();
entries = JSON.parse(catalog());
$("names").textContent = entries.map((e) => `${e.name} (${e.dim}-D)`).join(", ");
for (const id of ["env-fn", "env-box", "env-anchor", "env-quad", "env-lin"]) $(id).addEventListener("input", drawEnvelope);
for (const id of ["tile-fn", "tile-box", "tile-depth", "tile-flavor"]) $(id).addEventListener("input", drawTiles);
$("bnb-run").addEventListener("click", drawBnb);
drawEnvelope();
drawTiles();
drawBnb();
