/** DOM wiring for the single-page what-if client. */

import { ApiError, Client } from "./api.js";
import { JobPoller } from "./poller.js";
import { renderResultsBoard, renderScenarioEditor, escapeHtml } from "./render.js";
import { SessionState } from "./state.js";
import type { Scenario } from "./types.js";
import { validateScenario } from "./validate.js";

const client = new Client("");
const poller = new JobPoller((id) => client.job(id));
const session = new SessionState();

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function redrawEditor(): void {
  const host = byId<HTMLDivElement>("editor");
  if (!session.draft) {
    host.innerHTML = '<div class="empty-state">Paste or fetch a scenario to begin.</div>';
    return;
  }
  host.innerHTML = renderScenarioEditor(session.draft, validateScenario(session.draft));
  host.querySelectorAll<HTMLInputElement>(".intervention input").forEach((input) => {
    input.addEventListener("change", () => {
      const draft = session.draft!;
      const field = input.name as "runs" | "balls" | "wickets";
      draft.intervention[field] = Number(input.value);
      redrawEditor();
    });
  });
  host.querySelectorAll<HTMLInputElement>(".quotas input").forEach((input) => {
    input.addEventListener("change", () => {
      const name = input.name.replace(/^quota\./, "");
      session.draft!.bowlers![name].quota = Number(input.value);
      redrawEditor();
    });
  });
  const initial = host.querySelector<HTMLSelectElement>("select[name=initial_striker]");
  initial?.addEventListener("change", () => {
    session.draft!.initial_striker = initial.value;
    redrawEditor();
  });
}

function redrawBoard(jobId?: string): void {
  const board = byId<HTMLDivElement>("board");
  const snapshot = jobId ? session.job(jobId) : undefined;
  board.innerHTML = renderResultsBoard(snapshot, session.lastSubmission?.scenario);
}

function redrawPins(): void {
  const host = byId<HTMLDivElement>("pins");
  if (!session.pinned.length) {
    host.innerHTML = "";
    return;
  }
  host.innerHTML = session.pinned
    .map(
      (pin) => `
      <section class="pinned-card" data-pin="${escapeHtml(pin.id)}">
        <h3>${escapeHtml(pin.label)} <button data-unpin="${escapeHtml(pin.id)}">unpin</button></h3>
        ${renderResultsBoard(pin.snapshot, session.lastSubmission?.scenario)}
      </section>`,
    )
    .join("");
  host.querySelectorAll<HTMLButtonElement>("button[data-unpin]").forEach((btn) => {
    btn.addEventListener("click", () => {
      session.unpin(btn.dataset.unpin!);
      redrawPins();
    });
  });
}

function showError(message: string): void {
  byId<HTMLDivElement>("errors").innerHTML = `<p class="service-error">${escapeHtml(message)}</p>`;
}

function clearError(): void {
  byId<HTMLDivElement>("errors").innerHTML = "";
}

async function loadFixture(path: string): Promise<void> {
  const response = await fetch(path);
  session.loadDraft((await response.json()) as Scenario);
  redrawEditor();
}

async function launch(kind: "audit" | "optimize"): Promise<void> {
  if (!session.draft) {
    showError("load a scenario first");
    return;
  }
  clearError();
  const seed = Number(byId<HTMLInputElement>("seed").value);
  const options: Record<string, unknown> = { seed };
  const steps = Number(byId<HTMLInputElement>("steps").value);
  if (session.draft.kind === "bowling" && steps > 0) {
    options.steps = steps;
  }
  try {
    const submit = kind === "audit" ? client.submitAudit : client.submitOptimize;
    const { job_id } = await submit.call(client, session.draft, options);
    const submission = session.submit(job_id);
    await poller.watch(job_id, (snapshot) => {
      session.updateJob(snapshot);
      redrawBoard(job_id);
    });
    byId<HTMLButtonElement>("pin").onclick = () => {
      session.pin(`${session.draft?.name ?? "scenario"} seed ${seed}`, submission.id, job_id);
      redrawPins();
    };
  } catch (err) {
    if (err instanceof ApiError) {
      const details = (err.payload.details ?? [])
        .map((d) => `${d.field}: ${d.message}`)
        .join("; ");
      showError(`${err.status}: ${err.payload.error}${details ? ` (${details})` : ""}`);
    } else {
      showError(String(err));
    }
  }
}

export function boot(): void {
  void client.health().catch(() => {
    showError("decision service unreachable: start it with `t20opt serve`");
  });
  byId<HTMLButtonElement>("load-kkr").onclick = () => void loadFixture("/fixtures/kkr_mi_over12.json");
  byId<HTMLButtonElement>("load-gt").onclick = () => void loadFixture("/fixtures/gt_pbks_over10.json");
  byId<HTMLButtonElement>("load-paste").onclick = () => {
    try {
      session.loadDraft(JSON.parse(byId<HTMLTextAreaElement>("paste").value) as Scenario);
      clearError();
      redrawEditor();
    } catch (err) {
      showError(`not valid JSON: ${String(err)}`);
    }
  };
  byId<HTMLButtonElement>("run-audit").onclick = () => void launch("audit");
  byId<HTMLButtonElement>("run-optimize").onclick = () => void launch("optimize");
  redrawEditor();
  redrawBoard();
}

if (typeof document !== "undefined" && document.getElementById("editor")) {
  boot();
}
