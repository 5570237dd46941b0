/**
 * Pure renderers: (scenario, job snapshot) -> HTML strings.
 *
 * The board does no probability math. Every number it shows is the verbatim
 * value of a service response field (or of the scenario being edited); the
 * snapshot tests enforce that property literally.
 */

import type {
  AuditResult,
  Evaluation,
  JobSnapshot,
  OptimizeResult,
  OrderRow,
  PlanRow,
  Scenario,
} from "./types.js";
import type { Issue } from "./validate.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const e = escapeHtml;

function evalCell(ev: Evaluation | undefined): string {
  if (!ev) {
    return "<td class=\"value\">&mdash;</td>";
  }
  return `<td class="value">${ev.v_hat_pct}% &plusmn; ${ev.se_pct}</td>`;
}

// --- scenario editor ---------------------------------------------------------

function numberField(label: string, name: string, value: number): string {
  return (
    `<label class="field">${e(label)}` +
    `<input type="number" name="${e(name)}" value="${value}"></label>`
  );
}

function issueList(issues: Issue[]): string {
  if (!issues.length) {
    return '<p class="issues-none">Scenario looks valid.</p>';
  }
  const items = issues
    .map(
      (i) =>
        `<li class="issue ${i.severity}" data-field="${e(i.field)}">` +
        `<strong>${e(i.field)}</strong>: ${e(i.message)}</li>`,
    )
    .join("");
  return `<ul class="issues">${items}</ul>`;
}

function battingEditor(s: Scenario): string {
  const pool = (s.pool ?? [])
    .map((p) => `<li class="pool-member">${e(p)}</li>`)
    .join("");
  const actual = s.actual_decision
    ? `<ol class="actual-order">${s.actual_decision.map((p) => `<li>${e(p)}</li>`).join("")}</ol>`
    : '<p class="no-actual">No recorded decision (audit unavailable).</p>';
  return `
    <fieldset class="batting-fields">
      <legend>Batting resources</legend>
      <ul class="pool">${pool}</ul>
      <p class="non-striker">At the crease (fixed): <strong>${e(s.fixed_non_striker ?? "")}</strong></p>
      <label class="field">First ball faced by
        <select name="initial_striker">
          <option value="new_batsman"${s.initial_striker !== "fixed_non_striker" ? " selected" : ""}>incoming batsman</option>
          <option value="fixed_non_striker"${s.initial_striker === "fixed_non_striker" ? " selected" : ""}>surviving non-striker</option>
        </select>
      </label>
      <details class="actual"><summary>Actual order</summary>${actual}</details>
    </fieldset>`;
}

function bowlingEditor(s: Scenario): string {
  const bowlers = Object.entries(s.bowlers ?? {})
    .map(
      ([name, spec]) =>
        `<tr><td>${e(name)}</td>` +
        `<td><input type="number" name="quota.${e(name)}" value="${spec.quota}" min="0" max="4"></td></tr>`,
    )
    .join("");
  const slots = (s.slots ?? []).map((o) => `<span class="slot">Ov ${o}</span>`).join(" ");
  return `
    <fieldset class="bowling-fields">
      <legend>Bowling resources</legend>
      <p class="slots">Overs to assign: ${slots}</p>
      <p class="prev-bowler">Finishing the current over: <strong>${e(s.prev_bowler ?? "nobody")}</strong></p>
      <table class="quotas"><thead><tr><th>Bowler</th><th>Quota</th></tr></thead>
      <tbody>${bowlers}</tbody></table>
    </fieldset>`;
}

export function renderScenarioEditor(s: Scenario, issues: Issue[]): string {
  const iv = s.intervention;
  const runsLabel = s.kind === "batting" ? "Runs needed" : "Runs to defend";
  const wicketsLabel = s.kind === "batting" ? "Wickets in hand" : "Batting wickets in hand";
  return `
  <form class="scenario-editor" data-kind="${e(s.kind)}">
    <h2>${e(s.name ?? "scenario")}</h2>
    ${s.description ? `<p class="description">${e(s.description)}</p>` : ""}
    <fieldset class="intervention">
      <legend>Match state</legend>
      ${numberField(runsLabel, "runs", iv.runs)}
      ${numberField("Legal balls remaining", "balls", iv.balls)}
      ${numberField(wicketsLabel, "wickets", iv.wickets)}
    </fieldset>
    ${s.kind === "batting" ? battingEditor(s) : bowlingEditor(s)}
    ${issueList(issues)}
  </form>`;
}

// --- results board -----------------------------------------------------------

function isAudit(result: AuditResult | OptimizeResult): result is AuditResult {
  return "actual" in result;
}

function decisionsEqual(a: readonly string[], b: readonly string[] | undefined): boolean {
  return !!b && a.length === b.length && a.every((x, i) => x === b[i]);
}

function orderTable(
  rows: OrderRow[],
  actual: string[] | undefined,
  actualEval?: Evaluation,
): string {
  const body = rows
    .map((row) => {
      const isActual = decisionsEqual(row.order, actual);
      const classes = ["candidate", row.rank === 1 ? "best-row" : "", isActual ? "actual-row" : ""]
        .filter(Boolean)
        .join(" ");
      const order = row.order.map((p) => e(p)).join(" &rarr; ");
      return (
        `<tr class="${classes}">` +
        `<td class="rank">${row.rank}</td>` +
        `<td class="order">${order}${isActual ? ' <span class="flag">(actual)</span>' : ""}</td>` +
        evalCell(row.pass2 ?? row.pass1) +
        `<td class="pass">pass ${row.pass}</td>` +
        `<td class="sims">${(row.pass2 ?? row.pass1).n_sims}</td>` +
        "</tr>"
      );
    })
    .join("");
  let actualRow = "";
  if (actual && actualEval && !rows.some((r) => decisionsEqual(r.order, actual))) {
    const order = actual.map((p) => e(p)).join(" &rarr; ");
    actualRow =
      '<tr class="candidate actual-row">' +
      '<td class="rank"><span class="flag">(actual)</span></td>' +
      `<td class="order">${order}</td>` +
      evalCell(actualEval) +
      '<td class="pass">audit</td>' +
      `<td class="sims">${actualEval.n_sims}</td>` +
      "</tr>";
  }
  return (
    '<table class="ranked batting-ranked"><thead><tr>' +
    "<th>#</th><th>Order</th><th>Win</th><th>Stage</th><th>Sims</th>" +
    `</tr></thead><tbody>${body}${actualRow}</tbody></table>`
  );
}

function planGrid(
  rows: PlanRow[],
  actual: string[] | undefined,
  actualEval?: Evaluation,
): string {
  if (!rows.length) {
    return '<p class="empty-state">No plans to show.</p>';
  }
  const overs = Object.keys(rows[0].assignment).sort((a, b) => Number(a) - Number(b));
  const head = overs.map((o) => `<th class="over">Ov ${o}</th>`).join("");
  const bowlerCells = (assignment: Record<string, string>) =>
    overs
      .map((o) => `<td class="bowler" data-over="${o}">${e(assignment[o])}</td>`)
      .join("");
  const body = rows
    .map((row) => {
      const isActual = decisionsEqual(row.plan, actual);
      const classes = ["candidate", row.rank === 1 ? "best-row" : "", isActual ? "actual-row" : ""]
        .filter(Boolean)
        .join(" ");
      return (
        `<tr class="${classes}">` +
        `<td class="rank">${row.rank}${isActual ? ' <span class="flag">(actual)</span>' : ""}</td>` +
        bowlerCells(row.assignment) +
        evalCell(row.refined ?? row.fast) +
        "</tr>"
      );
    })
    .join("");
  let actualRow = "";
  if (actual && actualEval && !rows.some((r) => decisionsEqual(r.plan, actual))) {
    const assignment = Object.fromEntries(overs.map((o, i) => [o, actual[i]]));
    actualRow =
      '<tr class="candidate actual-row">' +
      '<td class="rank"><span class="flag">(actual)</span></td>' +
      bowlerCells(assignment) +
      evalCell(actualEval) +
      "</tr>";
  }
  return (
    '<table class="ranked bowling-ranked"><thead><tr>' +
    `<th>#</th>${head}<th>Defend</th>` +
    `</tr></thead><tbody>${body}${actualRow}</tbody></table>`
  );
}

function auditSummary(result: AuditResult): string {
  return `
  <div class="audit-summary">
    <p class="gap">Optimal improves on the actual decision by
      <strong>+${result.gap_pp_display} pp</strong>
      (actual ${result.actual.v_hat_pct}% &plusmn; ${result.actual.se_pct},
       optimal ${result.optimal.v_hat_pct}% &plusmn; ${result.optimal.se_pct},
       z = ${result.z}).</p>
    <p class="provenance">seed ${result.seed}, scenario ${e(result.scenario_hash.slice(0, 12))},
      corpus ${e(result.corpus_hash.slice(0, 12))}</p>
  </div>`;
}

export function renderResultsBoard(
  snapshot: JobSnapshot | undefined,
  scenario?: Scenario,
): string {
  if (!snapshot) {
    return '<div class="empty-state">No job yet: load a scenario and launch an optimization.</div>';
  }
  if (snapshot.status === "queued" || snapshot.status === "running") {
    const best =
      snapshot.progress.best_v_hat === null
        ? "&mdash;"
        : String(snapshot.progress.best_v_hat);
    return `
    <div class="job-progress" data-job="${e(snapshot.job_id)}">
      <p>${e(snapshot.kind)} job <code>${e(snapshot.job_id)}</code> is ${e(snapshot.status)}&hellip;</p>
      <p class="progress">step ${snapshot.progress.step}, best value so far ${best}</p>
    </div>`;
  }
  if (snapshot.status === "failed") {
    return `
    <div class="job-error" data-job="${e(snapshot.job_id)}">
      <p>Job <code>${e(snapshot.job_id)}</code> failed.</p>
      <pre class="diagnostics">${e(snapshot.error ?? "no diagnostics recorded")}</pre>
    </div>`;
  }
  const result = snapshot.result!;
  const actual = isAudit(result)
    ? result.actual.decision
    : scenario?.actual_decision;
  const actualEval = isAudit(result) ? result.actual : undefined;
  const table =
    result.kind === "batting"
      ? orderTable(result.ranked as OrderRow[], actual, actualEval)
      : planGrid(result.ranked as PlanRow[], actual, actualEval);
  return `
  <div class="results-board" data-job="${e(snapshot.job_id)}">
    ${isAudit(result) ? auditSummary(result) : ""}
    ${table}
  </div>`;
}
