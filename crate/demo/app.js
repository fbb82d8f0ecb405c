import init, { series_json, chain_json, closure_json } from "./pkg/polywreath_wasm.js";

const ready = init();

function section(id) {
  const root = document.getElementById(id);
  return {
    root,
    p: () => parseInt(root.querySelector(".p").value, 10),
    n: () => parseInt(root.querySelector(".n").value, 10),
    out: root.querySelector(".out"),
    button: root.querySelector("button"),
  };
}

function fail(out, err) {
  out.innerHTML = `<p class="error">${String(err)}</p>`;
}

function table(headers, rows) {
  const head = headers.map((h) => `<th>${h}</th>`).join("");
  const body = rows
    .map((cells) => `<tr>${cells.map((c) => `<td>${c}</td>`).join("")}</tr>`)
    .join("");
  return `<table><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

const mark = (ok, yes = "ok", no = "mismatch") =>
  ok ? `<span class="ok">${yes}</span>` : `<span class="bad">${no}</span>`;

// keep interactive clicks comfortably under a second
function guard(p, n, limit) {
  if (Math.pow(p, n - 1) > limit) {
    throw new Error(
      `p^(n-1) = ${Math.pow(p, n - 1)} is too large for this panel; pick smaller p or n`
    );
  }
}

const seriesPanel = section("series");
seriesPanel.button.addEventListener("click", async () => {
  try {
    await ready;
    guard(seriesPanel.p(), seriesPanel.n(), 200);
    const r = JSON.parse(series_json(seriesPanel.p(), seriesPanel.n()));
    const rows = r.rows.map((row) => [
      row.i,
      row.order,
      `Z<sub>${row.upper_index}</sub> ${mark(row.coincides)}`,
      `<span class="basis">${row.basis.join(", ") || "&ndash;"}</span>`,
    ]);
    seriesPanel.out.innerHTML =
      table(["i", "|&gamma;<sub>i</sub>|", "upper term", "basis"], rows) +
      `<p>${mark(r.all_coincide, "upper and lower central series coincide", "series differ")}</p>`;
  } catch (e) {
    fail(seriesPanel.out, e);
  }
});

const chainPanel = section("chain");
chainPanel.button.addEventListener("click", async () => {
  try {
    await ready;
    guard(chainPanel.p(), chainPanel.n(), 256);
    // run a little past the predicted window instead of to stabilization
    const steps = chainPanel.n() + 2;
    const r = JSON.parse(chain_json(chainPanel.p(), chainPanel.n(), steps));
    const steps = r.group.steps.map((s, idx) => {
      const lie = r.lie.steps[idx];
      const pred =
        s.predicted === null || s.predicted === undefined
          ? '<span class="muted">&ndash;</span>'
          : `${s.predicted} ${mark(s.predicted === s.logp_index)}`;
      return [
        s.i,
        s.basis,
        s.logp_index,
        lie ? lie.logp_index : "?",
        pred,
      ];
    });
    chainPanel.out.innerHTML =
      table(
        ["i", "log<sub>p</sub>|N<sub>i</sub>|", "group growth", "lie growth", "predicted q<sub>p,i+1</sub>"],
        steps
      ) +
      `<p>${mark(
        r.predictions_hold,
        "growth matches the partition counts and both chains agree",
        "mismatch"
      )}</p>`;
  } catch (e) {
    fail(chainPanel.out, e);
  }
});

const closurePanel = section("closure");
closurePanel.button.addEventListener("click", async () => {
  try {
    await ready;
    const element = closurePanel.root.querySelector(".element").value;
    const r = JSON.parse(closure_json(closurePanel.p(), closurePanel.n(), element));
    closurePanel.out.innerHTML = `
      <p>closure of <code>${r.element}</code> at layer ${r.layer}, p-degree ${r.pdeg}:
      order ${r.p}<sup>${r.log_order}</sup></p>
      <p class="basis">${r.basis.join(", ")}</p>
      <p>contains &gamma;<sub>${r.bound.gamma_index}</sub>: ${mark(r.bound.contains_gamma)};
      log<sub>${r.p}</sub> index ${r.bound.log_p_index} &le; ${r.bound.bound}:
      ${mark(r.bound.within)}</p>`;
  } catch (e) {
    fail(closurePanel.out, e);
  }
});
