import { describe, expect, it } from "vitest";

import { SessionState } from "../src/state.js";
import type { JobSnapshot, Scenario } from "../src/types.js";

import kkrScenario from "./fixtures/kkr_scenario.json";
import kkrJob from "./fixtures/kkr_audit_job.json";

const scenario = kkrScenario as unknown as Scenario;
const doneJob = kkrJob as unknown as JobSnapshot;

describe("session state", () => {
  it("keeps submitted scenarios isolated from later draft edits", () => {
    const session = new SessionState();
    session.loadDraft(scenario);
    const submission = session.submit("job-1");
    expect(submission.scenario.intervention.runs).toBe(73);

    session.draft!.intervention.runs = 50;
    session.draft!.pool!.pop();
    expect(submission.scenario.intervention.runs).toBe(73);
    expect(submission.scenario.pool).toHaveLength(4);
  });

  it("freezes submissions so results cannot be mutated in place", () => {
    const session = new SessionState();
    session.loadDraft(scenario);
    const submission = session.submit("job-1");
    expect(Object.isFrozen(submission.scenario)).toBe(true);
    expect(Object.isFrozen(submission.scenario.intervention)).toBe(true);
    expect(() => {
      (submission.scenario.intervention as { runs: number }).runs = 1;
    }).toThrow();
  });

  it("loadDraft does not alias the caller's object", () => {
    const session = new SessionState();
    const mine = structuredClone(scenario);
    session.loadDraft(mine);
    mine.intervention.runs = 1;
    expect(session.draft!.intervention.runs).toBe(73);
  });

  it("pins reference completed, immutable snapshots", () => {
    const session = new SessionState();
    session.loadDraft(scenario);
    const submission = session.submit(doneJob.job_id);
    session.updateJob(doneJob);
    const pinned = session.pin("baseline", submission.id, doneJob.job_id);
    expect(Object.isFrozen(pinned.snapshot)).toBe(true);
    expect(pinned.snapshot.status).toBe("done");
    expect(session.pinned).toHaveLength(1);
    session.unpin(pinned.id);
    expect(session.pinned).toHaveLength(0);
  });

  it("refuses to pin a job that has not completed", () => {
    const session = new SessionState();
    session.loadDraft(scenario);
    const submission = session.submit("job-7");
    session.updateJob({
      job_id: "job-7",
      kind: "audit",
      status: "running",
      progress: { step: 3, best_v_hat: 0.4 },
    });
    expect(() => session.pin("x", submission.id, "job-7")).toThrow(/completed/);
  });

  it("job snapshots are stored by value, not reference", () => {
    const session = new SessionState();
    const snap = structuredClone(doneJob);
    session.updateJob(snap);
    snap.status = "failed";
    expect(session.job(doneJob.job_id)!.status).toBe("done");
  });
});
