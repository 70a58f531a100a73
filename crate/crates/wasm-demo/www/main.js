import init, { connection_curve, theta_fkg_gap, even_subgraph_table } from "./pkg/graphrep_wasm.js";

const $ = (id) => document.getElementById(id);
const int = (id) => parseInt($(id).value, 10);

function show(id, f) {
  try {
    f();
  } catch (e) {
    $(id).innerHTML = `<span class="bad">${e}</span>`;
  }
}

function plot(points, decrease) {
  const c = $("curve-plot");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const ys = points.map((p) => p.value);
  const lo = Math.min(...ys), hi = Math.max(...ys);
  const sx = (x) => 20 + x * (c.width - 40);
  const sy = (y) => c.height - 20 - (hi > lo ? (y - lo) / (hi - lo) : 0.5) * (c.height - 40);
  ctx.beginPath();
  points.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, sx(p.x), sy(p.value)));
  ctx.stroke();
  if (decrease) {
    ctx.fillStyle = "#b00";
    for (const p of points) {
      if (approx(p.x, decrease)) {
        ctx.fillRect(sx(p.x) - 3, sy(p.value) - 3, 6, 6);
      }
    }
  }
}

function frac(s) {
  const [a, b] = s.split("/").map(Number);
  return b ? a / b : a;
}

function approx(x, d) {
  return Math.abs(x - frac(d.x1)) < 1e-12 || Math.abs(x - frac(d.x2)) < 1e-12;
}

function runCurve() {
  show("curve-out", () => {
    const r = JSON.parse(connection_curve($("curve-model").value, int("curve-n"), int("curve-m"), int("curve-steps")));
    plot(r.points, r.decrease);
    $("curve-out").textContent = r.decrease
      ? `decrease certified (${r.decrease.method}) between x = ${r.decrease.x1} and x = ${r.decrease.x2}`
      : "no decrease between neighbouring grid points";
  });
}

function runFkg() {
  show("fkg-out", () => {
    const r = JSON.parse(theta_fkg_gap($("fkg-model").value, int("fkg-n"), int("fkg-m"), $("fkg-x").value));
    $("fkg-out").textContent =
      `P(X1 and X2) - P(X1) P(X2) = ${r.gap}\n             ~ ${r.gap_decimal}\n` +
      (r.negative ? "negative: FKG fails for this pair" : "non-negative");
  });
}

function runTable() {
  show("table-out", () => {
    const r = JSON.parse(even_subgraph_table(int("table-n"), int("table-m"), $("table-x").value));
    const rows = r.rows
      .map((w) => `<tr><td>${w.label}</td><td>${w.edges}</td><td>${w.weight}</td><td>${w.probability}</td><td>${w.connected ? "yes" : "no"}</td></tr>`)
      .join("");
    $("table-out").innerHTML =
      `<table><tr><th>subgraph</th><th>edges</th><th>weight</th><th>probability at x = ${r.x}</th><th>a &harr; b</th></tr>${rows}</table>`;
  });
}

await init();
$("curve-run").onclick = runCurve;
$("fkg-run").onclick = runFkg;
$("table-run").onclick = runTable;
runCurve();
