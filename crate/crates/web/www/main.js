import init, { roots, istar_curve, cusps } from "./pkg/rslocal_web.js";

const $ = (id) => document.getElementById(id);

function descriptor() {
  const p = Number($("p").value);
  const kind = $("kind").value;
  const a = Number($("a").value);
  const a2 = $("a2").value === "" ? a : Number($("a2").value);
  const d = { p, kind };
  switch (kind) {
    case "Spherical":
      if ($("b").value.trim() !== "") d.satake_trace = $("b").value.trim();
      break;
    case "Type1": d.a_xi = a; d.a_xi_sq = a2; break;
    case "Type2": d.n = a; d.N = $("a2").value === "" ? (a % 2 ? a + 1 : a) : a2; break;
    case "Type3":
      d.a_beta = a;
      if ($("s0").value.trim() !== "") d.s0 = Number($("s0").value);
      else d.b = $("b").value.trim();
      break;
    case "Type4": d.a_beta = a; d.a_beta_sq = a2; break;
    case "Type5": d.a_beta = a; break;
  }
  return JSON.stringify(d);
}

function call(fn, ...args) {
  const out = JSON.parse(fn(...args));
  if (out && out.error) throw new Error(out.error.message);
  return out;
}

function fail(el, e) {
  el.innerHTML = "";
  const span = document.createElement("span");
  span.className = "err";
  span.textContent = e.message;
  el.appendChild(span);
}

function drawRoots() {
  const out = $("roots-out");
  const cv = $("roots");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  let scan;
  try { scan = call(roots, descriptor()); } catch (e) { return fail(out, e); }
  const r0 = Math.pow(scan.descriptor.p, -0.5);
  const extent = Math.max(2 * r0, ...scan.roots.map((z) => Math.hypot(z.re, z.im) * 1.15));
  const scale = cv.width / 2 / extent;
  const cx = cv.width / 2, cy = cv.height / 2;
  g.strokeStyle = "#ccc";
  g.beginPath(); g.moveTo(0, cy); g.lineTo(cv.width, cy); g.moveTo(cx, 0); g.lineTo(cx, cv.height); g.stroke();
  g.strokeStyle = "#36c";
  g.beginPath(); g.arc(cx, cy, r0 * scale, 0, 2 * Math.PI); g.stroke();
  for (const z of scan.roots) {
    g.fillStyle = z.deviation > 1e-8 ? "#c33" : "#222";
    g.beginPath(); g.arc(cx + z.re * scale, cy - z.im * scale, 4, 0, 2 * Math.PI); g.fill();
  }
  out.textContent = `${scan.polynomial}\ndegree ${scan.degree}, max deviation ${scan.max_deviation.toExponential(3)}`;
}

function drawCurve() {
  const out = $("curve-out");
  const cv = $("curve");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  let rep;
  try { rep = call(istar_curve, descriptor(), Number($("ymax").value), 400); } catch (e) { return fail(out, e); }
  const rows = rep.rows;
  const top = Math.max(...rows.map((r) => Math.max(r.istar_abs, r.lindelof_budget))) * 1.1 || 1;
  const ymax = rows[rows.length - 1].s_im || 1;
  const px = (y) => 40 + (y / ymax) * (cv.width - 50);
  const py = (v) => cv.height - 20 - (v / top) * (cv.height - 30);
  const line = (key, color) => {
    g.strokeStyle = color;
    g.beginPath();
    rows.forEach((r, i) => (i ? g.lineTo : g.moveTo).call(g, px(r.s_im), py(r[key])));
    g.stroke();
  };
  g.strokeStyle = "#ccc";
  g.strokeRect(40, 10, cv.width - 50, cv.height - 30);
  line("lindelof_budget", "#3a3");
  line("istar_abs", "#36c");
  g.fillStyle = "#555";
  g.fillText(top.toPrecision(3), 2, 16);
  g.fillText(ymax.toFixed(1), cv.width - 30, cv.height - 5);
  out.textContent = `blue |I*|, green budget; ${rep.violations} of ${rows.length} samples above the budget`;
}

function listCusps() {
  const out = $("cusps-out");
  let rows;
  try { rows = call(cusps, Number($("q").value)); } catch (e) { return fail(out, e); }
  const table = document.createElement("table");
  table.innerHTML = "<tr><th>c</th><th>d</th><th>width</th></tr>";
  let total = 0;
  for (const r of rows) {
    total += r.width;
    const tr = table.insertRow();
    for (const v of [r.c, r.d, r.width]) tr.insertCell().textContent = v;
  }
  out.innerHTML = "";
  out.append(table, `${rows.length} cusps, widths sum to ${total}`);
}

await init();
$("go-roots").onclick = drawRoots;
$("go-curve").onclick = drawCurve;
$("go-cusps").onclick = listCusps;
drawRoots();
drawCurve();
listCusps();
