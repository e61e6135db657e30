import init, { radicals, compose, lookup, four_classes } from "./pkg/vtt_web.js";

const $ = (id) => document.getElementById(id);
let catalogue = [];
let state = { radical: "hausdorff", assignment: {}, rules: [], abbreviated: false };

function currentRadical() {
  return catalogue.find((r) => r.id === state.radical);
}

function nextFill(region, fill) {
  if (fill === undefined) return "dot";
  if (fill === "dot" && region.negatable) return "circle";
  return undefined;
}

function renderControls() {
  const rad = currentRadical();
  const regions = $("regions");
  regions.replaceChildren();
  for (const region of rad.regions) {
    const b = document.createElement("button");
    const fill = state.assignment[region.name];
    b.textContent = `${region.name}: ${fill ?? "absent"}`;
    b.dataset.state = fill ?? "absent";
    b.onclick = () => {
      const next = nextFill(region, state.assignment[region.name]);
      if (next === undefined) delete state.assignment[region.name];
      else state.assignment[region.name] = next;
      update();
    };
    regions.append(b);
  }
  const rules = $("rules");
  rules.replaceChildren();
  for (const rule of rad.rules) {
    const b = document.createElement("button");
    const on = state.rules.includes(rule.id);
    b.textContent = (on ? "✓ " : "") + rule.name;
    b.disabled = !on && !rule.requires.every((r) => state.rules.includes(r));
    b.onclick = () => {
      state.rules = on ? state.rules.filter((r) => r !== rule.id && !dependsOn(rad, r, rule.id)) : [...state.rules, rule.id];
      update();
    };
    rules.append(b);
  }
  $("abbreviated").checked = state.abbreviated;
}

function dependsOn(rad, ruleId, removed) {
  const rule = rad.rules.find((r) => r.id === ruleId);
  return rule && rule.requires.some((req) => req === removed || dependsOn(rad, req, removed));
}

function update() {
  renderControls();
  const resp = JSON.parse(compose(JSON.stringify({ ...state, size: 192 })));
  const link = "#" + encodeURIComponent(JSON.stringify(state));
  $("permalink").href = link;
  history.replaceState(null, "", link);
  if (resp.error) {
    $("compose-error").textContent = resp.error;
    return;
  }
  $("compose-error").textContent = "";
  $("svg").innerHTML = resp.svg;
  const concept = $("concept");
  concept.textContent = resp.concept ? resp.concept.name : "unbound";
  concept.className = resp.concept ? "concept" : "unbound";
  $("constraints").textContent = resp.constraints.join(" ") || "(none)";
  $("text").textContent = resp.canonical_text + (resp.irregular ? "  (irregular)" : "");
}

function restore() {
  if (location.hash.length < 2) return;
  try {
    const s = JSON.parse(decodeURIComponent(location.hash.slice(1)));
    if (catalogue.some((r) => r.id === s.radical)) state = { assignment: {}, rules: [], abbreviated: false, ...s };
  } catch (_) {
    // ignore a malformed fragment
  }
}

function runLookup(ev) {
  ev?.preventDefault();
  const resp = JSON.parse(lookup($("literal").value, 160));
  if (resp.error) {
    $("lookup-svg").innerHTML = "";
    $("lookup-out").textContent = resp.error;
    return;
  }
  $("lookup-svg").innerHTML = resp.svg;
  const { svg, ...rest } = resp;
  $("lookup-out").textContent = JSON.stringify(rest, null, 2);
}

function parseSet(text) {
  return text.split(/[\s,]+/).filter(Boolean).map(Number);
}

function runFour(ev) {
  ev?.preventDefault();
  const input = { universe: Number($("universe").value), a: parseSet($("set-a").value), b: parseSet($("set-b").value) };
  const resp = JSON.parse(four_classes(JSON.stringify(input)));
  const out = $("classes");
  out.replaceChildren();
  if (resp.error) {
    $("partition").textContent = resp.error;
    return;
  }
  for (const c of resp.classes) {
    const fig = document.createElement("figure");
    fig.innerHTML = `${c.svg}<figcaption><code>${c.glyph}</code><br>${c.label} = {${c.members.join(", ")}}</figcaption>`;
    out.append(fig);
  }
  $("partition").textContent = resp.disjoint && resp.covers ? "The four classes partition U." : "Not a partition.";
}

async function main() {
  await init();
  catalogue = JSON.parse(radicals());
  restore();
  const select = $("radical");
  for (const r of catalogue) select.append(new Option(`${r.name} (${r.id})`, r.id));
  select.value = state.radical;
  select.onchange = () => {
    state = { radical: select.value, assignment: {}, rules: [], abbreviated: false };
    update();
  };
  $("abbreviated").onchange = (e) => {
    state.abbreviated = e.target.checked;
    update();
  };
  $("lookup-form").onsubmit = runLookup;
  $("four-form").onsubmit = runFour;
  $("status").textContent = "";
  update();
  runLookup();
  runFour();
}

main().catch((e) => {
  $("status").textContent = `Failed to load: ${e}`;
  $("status").className = "error";
});
