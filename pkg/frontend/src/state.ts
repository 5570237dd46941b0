/**
 * Session state for the what-if workflow: an editable scenario draft, the
 * immutable snapshot that was last submitted, polled job statuses, and
 * pinned result cards for side-by-side comparison.
 *
 * Drafts and submissions are isolated: submitting deep-clones the draft and
 * freezes the clone, so further editing can never mutate a submitted
 * scenario or anything a pinned card references.
 */

import type { JobSnapshot, Scenario } from "./types.js";

export interface Submission {
  readonly id: string;
  readonly scenario: Scenario;
  readonly jobId: string;
}

export interface PinnedCandidate {
  readonly id: string;
  readonly label: string;
  readonly submissionId: string;
  readonly snapshot: JobSnapshot;
}

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value as object)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

export class SessionState {
  draft: Scenario | null = null;
  private submissions: Submission[] = [];
  private jobs = new Map<string, JobSnapshot>();
  private pins: PinnedCandidate[] = [];
  private counter = 0;

  loadDraft(scenario: Scenario): void {
    this.draft = structuredClone(scenario);
  }

  get lastSubmission(): Submission | null {
    return this.submissions.length ? this.submissions[this.submissions.length - 1] : null;
  }

  submit(jobId: string): Submission {
    if (!this.draft) {
      throw new Error("nothing to submit: no scenario draft loaded");
    }
    const submission: Submission = deepFreeze({
      id: `sub-${++this.counter}`,
      scenario: structuredClone(this.draft),
      jobId,
    });
    this.submissions.push(submission);
    return submission;
  }

  updateJob(snapshot: JobSnapshot): void {
    this.jobs.set(snapshot.job_id, deepFreeze(structuredClone(snapshot)));
  }

  job(jobId: string): JobSnapshot | undefined {
    return this.jobs.get(jobId);
  }

  pin(label: string, submissionId: string, jobId: string): PinnedCandidate {
    const snapshot = this.jobs.get(jobId);
    if (!snapshot || snapshot.status !== "done") {
      throw new Error(`cannot pin ${jobId}: no completed result`);
    }
    const pinned: PinnedCandidate = deepFreeze({
      id: `pin-${++this.counter}`,
      label,
      submissionId,
      snapshot,
    });
    this.pins.push(pinned);
    return pinned;
  }

  get pinned(): readonly PinnedCandidate[] {
    return this.pins;
  }

  unpin(id: string): void {
    this.pins = this.pins.filter((p) => p.id !== id);
  }
}
