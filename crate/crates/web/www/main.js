// Expects the wasm-pack output (`--target web`) in ./pkg.
import init, { volume_table_json, period_matrix_json, evaluate_tensor_json } from "./pkg/hvol_web.js";

const $ = (id) => document.getElementById(id);
const genus = () => Number($("genus").value);

function fail(target, e) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "err";
  p.textContent = e instanceof Error ? e.message : String(e);
  target.append(p);
}

function cell(row, text, cls) {
  const td = document.createElement(row.parentElement?.tagName === "THEAD" ? "th" : "td");
  td.textContent = text;
  if (cls) td.className = cls;
  row.append(td);
}

function periodMatrix() {
  const out = $("pm-out");
  try {
    const r = JSON.parse(period_matrix_json(genus()));
    const t = document.createElement("table");
    for (const row of r.im_z) {
      const tr = t.insertRow();
      for (const x of row) cell(tr, x.toFixed(10));
    }
    const info = document.createElement("p");
    info.textContent = `max |Z - Zᵀ| = ${r.symmetry_error.toExponential(2)}, ` +
      `max |Re Z| = ${r.real_part_max.toExponential(2)}, ` +
      `Im Z positive definite: ${r.positive_definite}`;
    out.replaceChildren(t, info);
  } catch (e) {
    fail(out, e);
  }
}

let lastTable = null;

function renderTable() {
  const out = $("vt-out");
  out.replaceChildren();
  if (!lastTable) return;
  const kind = $("kind-filter").value;
  const head = out.createTHead().insertRow();
  for (const h of ["kind", "indices", "element", "value", "raw"]) cell(head, h);
  const body = out.createTBody();
  for (const e of lastTable.entries) {
    if (kind && e.kind !== kind) continue;
    const tr = body.insertRow();
    cell(tr, e.kind);
    cell(tr, e.indices);
    cell(tr, e.slots);
    cell(tr, e.value, e.matches ? (e.value === "1/2" ? "half" : "") : "bad");
    cell(tr, e.raw.toFixed(12));
  }
}

function volumeTable() {
  try {
    lastTable = JSON.parse(volume_table_json(genus()));
    const kinds = [...new Set(lastTable.entries.map((e) => e.kind))];
    const sel = $("kind-filter");
    const keep = sel.value;
    sel.replaceChildren(new Option("all", ""), ...kinds.map((k) => new Option(k, k)));
    sel.value = kinds.includes(keep) ? keep : "";
    const halves = lastTable.entries.filter((e) => e.value === "1/2").length;
    const bad = lastTable.entries.filter((e) => !e.matches).length;
    $("vt-summary").textContent =
      `${lastTable.entries.length} elements, ${halves} equal to 1/2, ${bad} differ from the expected value`;
    renderTable();
  } catch (e) {
    lastTable = null;
    $("vt-summary").textContent = "";
    fail($("vt-out"), e);
  }
}

function evaluate() {
  const out = $("ev-out");
  try {
    const r = JSON.parse(evaluate_tensor_json(genus(), $("tensor").value));
    const value = r.value ?? "not within snapping distance of 0 or 1/2";
    out.textContent = `I(${r.tensor}) = ${value}   (raw ${r.raw.toFixed(14)})`;
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("status").textContent = "";
$("pm-run").onclick = periodMatrix;
$("vt-run").onclick = volumeTable;
$("ev-run").onclick = evaluate;
$("kind-filter").onchange = renderTable;
$("tensor").onkeydown = (ev) => { if (ev.key === "Enter") evaluate(); };
$("genus").onchange = () => { periodMatrix(); if (lastTable) volumeTable(); };
periodMatrix();
