import init, { phi_curve, deform_curve, spectrum } from "./pkg/bessel_ladder_demo.js";

const POINTS = 400;
const $ = (id) => document.getElementById(id);

function plot(canvas, xMax, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const finite = series.flatMap((s) => s.ys.filter(Number.isFinite));
  if (finite.length === 0) return;
  let lo = Math.min(0, ...finite), hi = Math.max(0, ...finite);
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const pad = 0.05 * (hi - lo);
  lo -= pad; hi += pad;
  const px = (x) => (x / xMax) * (w - 40) + 30;
  const py = (y) => h - 10 - ((y - lo) / (hi - lo)) * (h - 20);

  ctx.strokeStyle = "#999";
  ctx.beginPath(); ctx.moveTo(px(0), py(0)); ctx.lineTo(px(xMax), py(0)); ctx.stroke();
  ctx.fillStyle = "#666";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toPrecision(3), 2, 12);
  ctx.fillText(lo.toPrecision(3), 2, h - 2);
  ctx.fillText(`z = ${xMax}`, w - 50, py(0) - 4);

  for (const { ys, color, dash } of series) {
    ctx.strokeStyle = color;
    ctx.setLineDash(dash ?? []);
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    let pen = false;
    ys.forEach((y, i) => {
      const x = (i / (ys.length - 1)) * xMax;
      if (!Number.isFinite(y)) { pen = false; return; }
      if (pen) ctx.lineTo(px(x), py(y)); else ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function guarded(errId, f) {
  return () => {
    try { f(); $(errId).textContent = ""; }
    catch (e) { $(errId).textContent = String(e.message ?? e); }
  };
}

const drawPhi = guarded("phi-err", () => {
  const zMax = Number($("phi-zmax").value);
  const ys = phi_curve(Number($("phi-order").value), zMax, POINTS);
  plot($("phi-plot"), zMax, [{ ys: Array.from(ys), color: "#333" }]);
});

const drawDeform = guarded("def-err", () => {
  const zMax = Number($("def-zmax").value);
  const pairs = deform_curve(
    Number($("def-n").value), Number($("def-lambda").value), Number($("def-window").value),
    $("def-strategy").value, zMax, POINTS,
  );
  const deformed = [], direct = [];
  for (let i = 0; i < pairs.length; i += 2) { deformed.push(pairs[i]); direct.push(pairs[i + 1]); }
  plot($("def-plot"), zMax, [
    { ys: direct, color: "#36c" },
    { ys: deformed, color: "#c33", dash: [5, 4] },
  ]);
});

const drawSpectrum = guarded("sp-err", () => {
  const lambda = Number($("sp-lambda").value);
  $("sp-lambda-out").textContent = lambda.toFixed(2);
  const modes = Number($("sp-modes").value);
  const eig = spectrum(lambda, modes, $("sp-rho").value);
  const canvas = $("sp-plot");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const span = modes + 2.5;
  const px = (x) => ((x + span) / (2 * span)) * (w - 20) + 10;
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#666";
  ctx.font = "11px sans-serif";
  ctx.beginPath(); ctx.moveTo(10, h / 2); ctx.lineTo(w - 10, h / 2); ctx.stroke();
  for (let k = -modes; k <= modes; k++) {
    ctx.beginPath(); ctx.moveTo(px(k), h / 2 - 4); ctx.lineTo(px(k), h / 2 + 4); ctx.stroke();
    if (modes <= 16 || k % 4 === 0) ctx.fillText(String(k), px(k) - 4, h / 2 + 18);
  }
  ctx.fillStyle = "#c33";
  for (const e of eig) {
    ctx.beginPath(); ctx.arc(px(e), h / 2 - 14, 3.5, 0, 2 * Math.PI); ctx.fill();
  }
});

await init();
for (const id of ["phi-order", "phi-zmax"]) $(id).addEventListener("input", drawPhi);
for (const id of ["def-n", "def-lambda", "def-window", "def-strategy", "def-zmax"]) $(id).addEventListener("input", drawDeform);
for (const id of ["sp-lambda", "sp-modes", "sp-rho"]) $(id).addEventListener("input", drawSpectrum);
drawPhi();
drawDeform();
drawSpectrum();
