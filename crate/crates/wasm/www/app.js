// Expects the wasm-bindgen output in ./pkg (see the README for the build).
import init, { evaluate_json, census_json } from "./pkg/conlat_wasm.js";

const SVG = "http://www.w3.org/2000/svg";

function draw(svg, d) {
  svg.replaceChildren();
  const w = svg.width.baseVal.value, h = svg.height.baseVal.value, pad = 24;
  const px = (i) => pad + d.x[i] * (w - 2 * pad);
  const py = (i) => h - pad - d.y[i] * (h - 2 * pad);
  for (const [a, b] of d.covers) {
    const line = document.createElementNS(SVG, "line");
    line.setAttribute("x1", px(a));
    line.setAttribute("y1", py(a));
    line.setAttribute("x2", px(b));
    line.setAttribute("y2", py(b));
    svg.appendChild(line);
  }
  for (let i = 0; i < d.n; i++) {
    const dot = document.createElementNS(SVG, "circle");
    dot.setAttribute("cx", px(i));
    dot.setAttribute("cy", py(i));
    dot.setAttribute("r", 4);
    svg.appendChild(dot);
    const label = document.createElementNS(SVG, "text");
    label.setAttribute("x", px(i) + 7);
    label.setAttribute("y", py(i) + 4);
    label.textContent = d.labels[i];
    svg.appendChild(label);
  }
}

function evaluate() {
  const error = document.getElementById("error");
  error.textContent = "";
  try {
    const e = JSON.parse(evaluate_json(document.getElementById("expr").value));
    document.getElementById("summary").textContent =
      `${e.lattice.n} elements, ${e.congruence_count} congruences, ` +
      `${e.filters} filters, ${e.ideals} ideals`;
    draw(document.getElementById("lattice"), e.lattice);
    draw(document.getElementById("con"), e.con_lattice);
    document.getElementById("congruences").textContent =
      e.congruences.map((c, i) => `θ${i}  ${c}`).join("\n");
  } catch (err) {
    error.textContent = String(err.message ?? err);
  }
}

function runCensus() {
  const out = document.getElementById("census-out");
  try {
    out.textContent = census_json(Number(document.getElementById("census-n").value));
  } catch (err) {
    out.textContent = String(err.message ?? err);
  }
}

await init();
document.getElementById("eval").addEventListener("submit", (ev) => { ev.preventDefault(); evaluate(); });
document.getElementById("census").addEventListener("submit", (ev) => { ev.preventDefault(); runCensus(); });
evaluate();
