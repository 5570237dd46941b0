/**
 * Job polling with per-job de-duplication: while a request for a job is in
 * flight, further polls of the same job share its promise instead of
 * stacking new requests (slow networks plus eager UI timers otherwise pile
 * up). Completed jobs stop polling.
 */

import type { JobSnapshot } from "./types.js";

export type JobFetcher = (jobId: string) => Promise<JobSnapshot>;

export class JobPoller {
  private inFlight = new Map<string, Promise<JobSnapshot>>();

  constructor(private readonly fetchJob: JobFetcher) {}

  poll(jobId: string): Promise<JobSnapshot> {
    const pending = this.inFlight.get(jobId);
    if (pending) {
      return pending;
    }
    const promise = this.fetchJob(jobId).finally(() => {
      this.inFlight.delete(jobId);
    });
    this.inFlight.set(jobId, promise);
    return promise;
  }

  /** Poll until the job reaches a terminal state, invoking onUpdate per poll. */
  async watch(
    jobId: string,
    onUpdate: (snapshot: JobSnapshot) => void,
    intervalMs = 500,
    sleep: (ms: number) => Promise<void> = (ms) => new Promise((r) => setTimeout(r, ms)),
  ): Promise<JobSnapshot> {
    for (;;) {
      const snapshot = await this.poll(jobId);
      onUpdate(snapshot);
      if (snapshot.status === "done" || snapshot.status === "failed") {
        return snapshot;
      }
      await sleep(intervalMs);
    }
  }
}
