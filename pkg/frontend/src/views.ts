/** DOM views: session list, creator form, and the live session dashboard. */

import {
  ApiError,
  createSession,
  getQuery,
  getState,
  listSessions,
  postResponse,
  type CreateSessionRequest,
  type Preference,
  type QueryView,
  type SessionState,
} from "./api";
import { renderHeatmap } from "./heatmap";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) node.textContent = text;
  return node;
}

function formatNumber(x: number): string {
  return Math.abs(x) >= 1e4 || (x !== 0 && Math.abs(x) < 1e-3)
    ? x.toExponential(4)
    : x.toPrecision(5);
}

// ---------------------------------------------------------------------------
// session list + creator
// ---------------------------------------------------------------------------

export async function renderHome(root: HTMLElement): Promise<void> {
  root.innerHTML = "";
  root.appendChild(el("h1", {}, "prefopt sessions"));

  const listBox = el("div", { id: "session-list" });
  root.appendChild(listBox);
  try {
    const sessions = await listSessions();
    if (sessions.length === 0) {
      listBox.appendChild(el("p", {}, "No sessions yet."));
    } else {
      const table = el("table");
      const head = el("tr");
      for (const label of ["name", "phase", "progress", ""]) {
        head.appendChild(el("th", {}, label));
      }
      table.appendChild(head);
      for (const s of sessions) {
        const row = el("tr");
        row.appendChild(el("td", {}, s.name || s.id.slice(0, 8)));
        row.appendChild(el("td", {}, s.phase));
        row.appendChild(el("td", {}, `${s.n_samples} / ${s.n_max}`));
        const link = el("a", { href: `#/session/${s.id}` }, "open");
        const cell = el("td");
        cell.appendChild(link);
        row.appendChild(cell);
        table.appendChild(row);
      }
      listBox.appendChild(table);
    }
  } catch (err) {
    listBox.appendChild(serviceErrorBanner(err, () => renderHome(root)));
  }

  root.appendChild(el("h2", {}, "New session"));
  root.appendChild(buildCreatorForm());
}

export function buildCreatorForm(): HTMLFormElement {
  const form = el("form", { id: "creator" });
  const rows: Array<[string, string, string]> = [
    ["name", "text", "demo"],
    ["dims", "text", "x0, x1"],
    ["units", "text", ","],
    ["lower", "text", "-1, -1"],
    ["upper", "text", "1, 1"],
    ["n_max", "number", "30"],
    ["n_init", "text", ""],
    ["seed", "number", "0"],
  ];
  for (const [name, type, value] of rows) {
    const label = el("label", {}, `${name} `);
    const input = el("input", { name, type, value });
    label.appendChild(input);
    form.appendChild(label);
  }
  const satLabel = el("label", {}, "satisfaction labels ");
  satLabel.appendChild(el("input", { name: "has_satisfaction", type: "checkbox" }));
  form.appendChild(satLabel);
  form.appendChild(el("button", { type: "submit" }, "Create"));
  const errorBox = el("p", { class: "error", id: "creator-error" });
  form.appendChild(errorBox);

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    errorBox.textContent = "";
    let body: CreateSessionRequest;
    try {
      body = readCreatorForm(form);
    } catch (err) {
      errorBox.textContent = (err as Error).message;
      return;
    }
    try {
      const created = await createSession(body);
      window.location.hash = `#/session/${created.session.id}`;
    } catch (err) {
      errorBox.textContent =
        err instanceof ApiError ? err.detail : String(err);
    }
  });
  return form;
}

function splitList(raw: string): string[] {
  return raw
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

export function readCreatorForm(form: HTMLFormElement): CreateSessionRequest {
  const data = new FormData(form);
  const text = (name: string) => String(data.get(name) ?? "").trim();
  const dimNames = splitList(text("dims"));
  const lower = splitList(text("lower")).map(Number);
  const upper = splitList(text("upper")).map(Number);
  if (dimNames.length === 0) throw new Error("at least one dimension name");
  if (lower.length !== dimNames.length || upper.length !== dimNames.length) {
    throw new Error("lower/upper must list one bound per dimension");
  }
  if (lower.some(Number.isNaN) || upper.some(Number.isNaN)) {
    throw new Error("bounds must be numbers");
  }
  const units = splitList(text("units"));
  const body: CreateSessionRequest = {
    name: text("name"),
    dim_names: dimNames,
    dim_units: dimNames.map((_, k) => units[k] ?? ""),
    lower,
    upper,
    n_max: Number(text("n_max")),
    seed: Number(text("seed") || "0"),
    has_satisfaction: data.get("has_satisfaction") !== null,
  };
  if (text("n_init") !== "") body.n_init = Number(text("n_init"));
  return body;
}

// ---------------------------------------------------------------------------
// dashboard
// ---------------------------------------------------------------------------

function serviceErrorBanner(err: unknown, retry: () => void): HTMLElement {
  const banner = el("div", { class: "banner error" });
  banner.appendChild(
    el("span", {}, err instanceof ApiError ? err.detail : "service unreachable"),
  );
  const button = el("button", { type: "button" }, "Retry");
  button.addEventListener("click", retry);
  banner.appendChild(button);
  return banner;
}

function parameterTable(
  names: string[],
  units: string[],
  candidate: number[],
  incumbent: number[] | null,
): HTMLTableElement {
  const table = el("table", { class: "params" });
  const head = el("tr");
  for (const label of ["parameter", "candidate", "incumbent"]) {
    head.appendChild(el("th", {}, label));
  }
  table.appendChild(head);
  names.forEach((name, k) => {
    const row = el("tr");
    const unit = units[k] ? ` (${units[k]})` : "";
    row.appendChild(el("td", {}, `${name}${unit}`));
    row.appendChild(el("td", { class: "num" }, formatNumber(candidate[k])));
    row.appendChild(
      el("td", { class: "num" },
        incumbent === null ? "—" : formatNumber(incumbent[k])),
    );
    table.appendChild(row);
  });
  return table;
}

export interface AnswerFormState {
  preference: Preference | null;
  feasible: 0 | 1;
  satisfactory: 0 | 1;
}

/** Map the three comparison controls onto the wire preference encoding. */
export function preferenceFromChoice(
  choice: "candidate" | "incumbent" | "tie",
): Preference {
  if (choice === "candidate") return -1;
  if (choice === "incumbent") return 1;
  return 0;
}

export function buildAnswerForm(
  query: Extract<QueryView, { status: "pending" }>,
  onSubmit: (body: {
    iteration: number;
    preference: Preference | null;
    feasible: 0 | 1;
    satisfactory: 0 | 1 | null;
  }) => Promise<void>,
): HTMLFormElement {
  const form = el("form", { id: "answer" });

  if (query.requires_preference) {
    const group = el("fieldset");
    group.appendChild(el("legend", {}, "Which do you prefer?"));
    for (const [choice, label] of [
      ["candidate", "Prefer candidate"],
      ["incumbent", "Prefer incumbent"],
      ["tie", "No preference"],
    ] as const) {
      const wrap = el("label");
      wrap.appendChild(
        el("input", { type: "radio", name: "preference", value: choice }),
      );
      wrap.appendChild(el("span", {}, label));
      group.appendChild(wrap);
    }
    form.appendChild(group);
  }

  const feasGroup = el("fieldset");
  feasGroup.appendChild(el("legend", {}, "Is the candidate acceptable?"));
  for (const [value, label] of [["1", "Yes"], ["0", "No"]] as const) {
    const wrap = el("label");
    const radio = el("input", { type: "radio", name: "feasible", value });
    if (value === "1") radio.setAttribute("checked", "checked");
    wrap.appendChild(radio);
    wrap.appendChild(el("span", {}, label));
    feasGroup.appendChild(wrap);
  }
  form.appendChild(feasGroup);

  if (query.requires_satisfaction) {
    const satGroup = el("fieldset");
    satGroup.appendChild(el("legend", {}, "Is the candidate satisfactory?"));
    for (const [value, label] of [["1", "Yes"], ["0", "No"]] as const) {
      const wrap = el("label");
      const radio = el("input", { type: "radio", name: "satisfactory", value });
      if (value === "1") radio.setAttribute("checked", "checked");
      wrap.appendChild(radio);
      wrap.appendChild(el("span", {}, label));
      satGroup.appendChild(wrap);
    }
    form.appendChild(satGroup);
  }

  const submit = el("button", { type: "submit" }, "Submit answer");
  form.appendChild(submit);
  const errorBox = el("p", { class: "error" });
  form.appendChild(errorBox);

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    if (submit.disabled) return;
    const data = new FormData(form);
    let preference: Preference | null = null;
    if (query.requires_preference) {
      const choice = data.get("preference");
      if (choice === null) {
        errorBox.textContent = "pick a preference first";
        return;
      }
      preference = preferenceFromChoice(
        choice as "candidate" | "incumbent" | "tie",
      );
    }
    const feasible = (data.get("feasible") === "1" ? 1 : 0) as 0 | 1;
    const satisfactory = query.requires_satisfaction
      ? ((data.get("satisfactory") === "1" ? 1 : 0) as 0 | 1)
      : null;
    // disabled until the service acknowledges, so a double click can never
    // post the same iteration twice
    submit.disabled = true;
    errorBox.textContent = "";
    try {
      await onSubmit({
        iteration: query.iteration,
        preference,
        feasible,
        satisfactory,
      });
    } catch (err) {
      errorBox.textContent =
        err instanceof ApiError ? err.detail : String(err);
      submit.disabled = false;
    }
  });
  return form;
}

function historyTable(state: SessionState): HTMLTableElement {
  const table = el("table", { class: "history" });
  const head = el("tr");
  const cols = ["iter", ...state.dim_names, "preference", "feasible"];
  if (state.session && state.history.some((r) => r.satisfactory !== null)) {
    cols.push("satisfactory");
  }
  for (const label of cols) head.appendChild(el("th", {}, label));
  table.appendChild(head);
  const prefLabel = (p: number | null) =>
    p === null ? "—" : p === -1 ? "candidate" : p === 1 ? "incumbent" : "tie";
  for (const row of state.history) {
    const tr = el("tr");
    tr.appendChild(el("td", {}, String(row.iteration)));
    for (const x of row.point) {
      tr.appendChild(el("td", { class: "num" }, formatNumber(x)));
    }
    tr.appendChild(el("td", {}, prefLabel(row.preference)));
    tr.appendChild(el("td", {}, row.feasible ? "yes" : "no"));
    if (cols.includes("satisfactory")) {
      tr.appendChild(
        el("td", {},
          row.satisfactory === null ? "—" : row.satisfactory ? "yes" : "no"),
      );
    }
    table.appendChild(tr);
  }
  return table;
}

function finishedCard(
  query: Extract<QueryView, { status: "finished" }>,
  state: SessionState,
): HTMLElement {
  const card = el("div", { class: "card finished", id: "finished" });
  card.appendChild(el("h2", {}, "Finished"));
  card.appendChild(
    el("p", {}, `All ${query.n_samples} evaluations answered.`),
  );
  if (query.best_point !== null) {
    const parts = query.best_point.map(
      (x, k) => `${state.dim_names[k]} = ${formatNumber(x)}`,
    );
    card.appendChild(el("p", { id: "best-point" }, `Best: ${parts.join(", ")}`));
  }
  return card;
}

export async function renderDashboard(
  root: HTMLElement,
  sessionId: string,
): Promise<void> {
  root.innerHTML = "";
  let state: SessionState;
  try {
    state = await getState(sessionId);
  } catch (err) {
    root.appendChild(
      serviceErrorBanner(err, () => renderDashboard(root, sessionId)),
    );
    return;
  }

  const title = state.session.name || sessionId.slice(0, 8);
  root.appendChild(el("h1", {}, title));
  root.appendChild(el("a", { href: "#/" }, "all sessions"));
  root.appendChild(
    el("p", { id: "progress" },
      `${state.session.n_samples} of ${state.session.n_max} evaluations`),
  );

  const query = state.query;
  if (query.status === "finished") {
    root.appendChild(finishedCard(query, state));
  } else {
    const card = el("div", { class: "card", id: "query-card" });
    card.appendChild(
      el("h2", {}, `Query ${query.iteration + 1} of ${query.n_max}`),
    );
    card.appendChild(
      parameterTable(
        query.dim_names,
        query.dim_units,
        query.candidate,
        query.incumbent,
      ),
    );
    card.appendChild(
      buildAnswerForm(query, async (body) => {
        await postResponse(sessionId, body).catch(async (err) => {
          if (err instanceof ApiError && err.status === 409) {
            await getQuery(sessionId); // refresh on conflict
          }
          throw err;
        });
        await renderDashboard(root, sessionId);
      }),
    );
    root.appendChild(card);
  }

  if (state.g_grid) {
    const section = el("div", { class: "card" });
    section.appendChild(el("h2", {}, "Acceptability probability"));
    const canvas = el("canvas", {
      id: "g-heatmap",
      width: "250",
      height: "250",
    });
    renderHeatmap(canvas, state.g_grid);
    section.appendChild(canvas);
    if (state.s_grid) {
      section.appendChild(el("h2", {}, "Satisfaction probability"));
      const sCanvas = el("canvas", {
        id: "s-heatmap",
        width: "250",
        height: "250",
      });
      renderHeatmap(sCanvas, state.s_grid);
      section.appendChild(sCanvas);
    }
    root.appendChild(section);
  }

  root.appendChild(el("h2", {}, "History"));
  root.appendChild(historyTable(state));
}
