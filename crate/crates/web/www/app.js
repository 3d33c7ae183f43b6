import init, { convergence, infsup, solution_slice } from "./pkg/ordfem_web.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => (x === null || x === undefined ? "" : Number(x).toExponential(3));

function table(head, rows) {
  const t = document.createElement("table");
  const tr = t.insertRow();
  for (const h of head) {
    const th = document.createElement("th");
    th.textContent = h;
    tr.appendChild(th);
  }
  for (const r of rows) {
    const row = t.insertRow();
    for (const c of r) row.insertCell().textContent = c;
  }
  return t;
}

function showError(out, e) {
  out.replaceChildren();
  const p = document.createElement("p");
  p.className = "err";
  p.textContent = String(e.message ?? e);
  out.appendChild(p);
}

// Let the button repaint before a blocking solve.
function busy(button, work) {
  button.disabled = true;
  setTimeout(() => {
    try {
      work();
    } finally {
      button.disabled = false;
    }
  }, 20);
}

function runConvergence() {
  const out = $("conv-out");
  busy($("conv-run"), () => {
    try {
      const r = JSON.parse(convergence($("conv-problem").value, $("conv-n").value, $("conv-coef").value));
      const rows = r.rows.map((x) => [x.n, x.dofs.join(" / "), fmt(x.err_u), fmt(x.err_phi), fmt(x.err_aux_cauchy), fmt(x.relative_residual)]);
      rows.push(["rate", "", r.rates.err_u.toFixed(3), r.rates.err_phi.toFixed(3), r.rates.err_aux_cauchy?.toFixed(3) ?? "", ""]);
      out.replaceChildren(table(["n", "dofs", "error u", "error φ", "aux. difference", "residual"], rows));
    } catch (e) {
      showError(out, e);
    }
  });
}

function runInfsup() {
  const out = $("infsup-out");
  busy($("infsup-run"), () => {
    try {
      const r = JSON.parse(infsup($("infsup-pair").value, $("infsup-n").value));
      const rows = r.ns.map((n, i) => [n, r.betas[i].toFixed(4), r.kernel_dims[i]]);
      const t = table(["n", "β", "kernel"], rows);
      const p = document.createElement("p");
      p.textContent = `drift ${(100 * r.drift).toFixed(1)} %`;
      out.replaceChildren(t, p);
    } catch (e) {
      showError(out, e);
    }
  });
}

function paint(canvas, values, res, lo, hi) {
  canvas.width = res;
  canvas.height = res;
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(res, res);
  const span = hi - lo || 1;
  for (let j = 0; j < res; j++) {
    for (let i = 0; i < res; i++) {
      const t = (values[j * res + i] - lo) / span;
      // row 0 is y near 0, drawn at the bottom
      const k = 4 * ((res - 1 - j) * res + i);
      img.data[k] = Math.round(255 * Math.min(1, 2 * t));
      img.data[k + 1] = Math.round(255 * Math.max(0, 2 * t - 1));
      img.data[k + 2] = Math.round(255 * (1 - t) * 0.6);
      img.data[k + 3] = 255;
    }
  }
  ctx.putImageData(img, 0, 0);
}

function runSlice() {
  const out = $("slice-out");
  busy($("slice-run"), () => {
    try {
      const res = 64;
      const r = JSON.parse(solution_slice($("slice-problem").value, Number($("slice-n").value), Number($("slice-z").value), res));
      const all = r.discrete.concat(r.exact);
      const lo = Math.min(...all);
      const hi = Math.max(...all);
      paint($("slice-discrete"), r.discrete, res, lo, hi);
      paint($("slice-exact"), r.exact, res, lo, hi);
      const p = document.createElement("p");
      p.textContent = `dofs ${r.dofs.join(" / ")}, max pointwise error ${fmt(r.max_error)}, range [${lo.toFixed(3)}, ${hi.toFixed(3)}]`;
      out.replaceChildren(p);
    } catch (e) {
      showError(out, e);
    }
  });
}

await init();
$("conv-run").onclick = runConvergence;
$("infsup-run").onclick = runInfsup;
$("slice-run").onclick = runSlice;
$("slice-z").oninput = () => ($("slice-z-val").textContent = Number($("slice-z").value).toFixed(2));
