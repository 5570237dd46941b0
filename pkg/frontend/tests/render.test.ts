import { describe, expect, it } from "vitest";

import { renderResultsBoard, renderScenarioEditor } from "../src/render.js";
import { validateScenario } from "../src/validate.js";
import type { JobSnapshot, Scenario } from "../src/types.js";

import kkrScenario from "./fixtures/kkr_scenario.json";
import gtScenario from "./fixtures/gt_scenario.json";
import kkrJob from "./fixtures/kkr_audit_job.json";
import gtJob from "./fixtures/gt_audit_job.json";
import gtRunning from "./fixtures/gt_job_running.json";

const kkr = kkrScenario as unknown as Scenario;
const gt = gtScenario as unknown as Scenario;
const kkrDone = kkrJob as unknown as JobSnapshot;
const gtDone = gtJob as unknown as JobSnapshot;
const running = gtRunning as unknown as JobSnapshot;

/** Every number in a JSON document: values plus numeric object keys. */
function numbersIn(value: unknown, out = new Set<number>()): Set<number> {
  if (typeof value === "number") {
    out.add(value);
  } else if (Array.isArray(value)) {
    value.forEach((v) => numbersIn(v, out));
  } else if (value && typeof value === "object") {
    for (const [k, v] of Object.entries(value)) {
      if (/^\d+(\.\d+)?$/.test(k)) {
        out.add(Number(k));
      }
      numbersIn(v, out);
    }
  }
  return out;
}

/** Numbers a reader sees: tokens of the tag-stripped text content. */
function displayedNumbers(html: string): number[] {
  const text = html.replace(/<[^>]*>/g, " ").replace(/&[a-z]+;/g, " ");
  const tokens = text.split(/[^\w.\-]+/).filter(Boolean);
  return tokens.filter((t) => /^\d+(\.\d+)?$/.test(t)).map(Number);
}

describe("results board", () => {
  it("renders the batting audit fixture (snapshot)", () => {
    expect(renderResultsBoard(kkrDone, kkr)).toMatchSnapshot();
  });

  it("renders the bowling audit fixture (snapshot)", () => {
    expect(renderResultsBoard(gtDone, gt)).toMatchSnapshot();
  });

  it.each([
    ["batting", kkrDone],
    ["bowling", gtDone],
  ])("every displayed number is a service response field (%s)", (_label, job) => {
    const html = renderResultsBoard(job as JobSnapshot, undefined);
    const allowed = numbersIn(job);
    const shown = displayedNumbers(html);
    expect(shown.length).toBeGreaterThan(40);
    for (const n of shown) {
      expect(allowed, `displayed number ${n} is not a response field`).toContain(n);
    }
  });

  it("flags exactly the actual-decision row, visibly", () => {
    const html = renderResultsBoard(kkrDone, kkr);
    const flagged = html.match(/actual-row/g) ?? [];
    expect(flagged).toHaveLength(1);
    expect(html).toContain('<span class="flag">(actual)</span>');
    // the flagged row carries the actual order from the response itself
    const rowStart = html.indexOf("actual-row");
    const row = html.slice(rowStart, html.indexOf("</tr>", rowStart));
    expect(row).toContain("SA Yadav");
    expect(row).toContain("Naman Dhir");
  });

  it("renders a 24-row ranked list for the batting fixture job", () => {
    const html = renderResultsBoard(kkrDone, kkr);
    expect(html.match(/<tr class="candidate/g)).toHaveLength(24);
  });

  it("shows the scarce death-over specialist at over 16 in the top plan", () => {
    const html = renderResultsBoard(gtDone, gt);
    const start = html.indexOf("best-row");
    const bestRow = html.slice(start, html.indexOf("</tr>", start));
    expect(bestRow).toContain('data-over="16">Rashid Khan');
    const flagged = html.match(/actual-row/g) ?? [];
    expect(flagged).toHaveLength(1);
  });

  it("renders an empty-state prompt with no job", () => {
    const html = renderResultsBoard(undefined);
    expect(html).toContain("empty-state");
    expect(html).toMatchSnapshot();
  });

  it("renders live progress for a running job", () => {
    const html = renderResultsBoard(running);
    expect(html).toContain("job-progress");
    expect(html).toContain(`step ${running.progress.step}`);
    expect(html).toContain(String(running.progress.best_v_hat));
    for (const n of displayedNumbers(html)) {
      expect(numbersIn(running)).toContain(n);
    }
  });

  it("renders failure diagnostics", () => {
    const failed: JobSnapshot = {
      job_id: "job-9",
      kind: "audit",
      status: "failed",
      progress: { step: 0, best_v_hat: null },
      error: "InfeasibleScenarioError: total quota 4 cannot fill 10 slots",
    };
    const html = renderResultsBoard(failed);
    expect(html).toContain("job-error");
    expect(html).toContain("total quota 4 cannot fill 10 slots");
  });
});

describe("scenario editor", () => {
  it("shows the batting fixture fields: 73 needed, 44 balls, pool of four", () => {
    const html = renderScenarioEditor(kkr, validateScenario(kkr));
    expect(html).toContain('name="runs" value="73"');
    expect(html).toContain('name="balls" value="44"');
    expect(html.match(/pool-member/g)).toHaveLength(4);
    expect(html).toContain("RD Rickelton");
    expect(html).toContain("Scenario looks valid");
    expect(html).toMatchSnapshot();
  });

  it("shows the bowling fixture fields and quotas", () => {
    const html = renderScenarioEditor(gt, validateScenario(gt));
    expect(html).toContain('name="runs" value="80"');
    expect(html).toContain('name="balls" value="60"');
    expect(html).toContain("Rashid Khan");
    expect(html).toContain('name="quota.Rashid Khan" value="1"');
    expect(html.match(/<span class="slot">/g)).toHaveLength(10);
    expect(html).toMatchSnapshot();
  });

  it("renders inline warnings from validation", () => {
    const broken = structuredClone(gt);
    for (const name of Object.keys(broken.bowlers!)) {
      broken.bowlers![name].quota = 0;
    }
    const html = renderScenarioEditor(broken, validateScenario(broken));
    expect(html).toContain('class="issue warning"');
    expect(html).toContain("cannot fill");
  });
});
