/**
 * Types mirroring the decision service's documented JSON API.
 * The UI displays these fields verbatim; it never derives new numbers.
 */

export type Kind = "batting" | "bowling";

export interface SummaryRow {
  sr?: number;
  er?: number;
  p_w: number;
}

export interface PlayerProfileSpec {
  summary?: Record<string, SummaryRow>;
  vector?: Record<string, Record<string, number>>;
  ref?: string;
}

export interface Scenario {
  kind: Kind;
  name?: string;
  description?: string;
  intervention: { runs: number; balls: number; wickets: number };
  population_shapes?: Record<string, Record<string, number>>;
  // batting
  players?: Record<string, PlayerProfileSpec>;
  pool?: string[];
  fixed_non_striker?: string;
  initial_striker?: string;
  // bowling
  slots?: number[];
  prev_bowler?: string;
  bowlers?: Record<string, PlayerProfileSpec & { quota: number }>;
  actual_decision?: string[];
}

export interface Evaluation {
  v_hat: number;
  v_hat_pct: number;
  se: number;
  se_pct: number;
  n_sims: number;
  seed: number;
}

export interface OrderRow {
  rank: number;
  order: string[];
  pass: 1 | 2;
  pass1: Evaluation;
  pass2?: Evaluation;
}

export interface PlanRow {
  rank: number;
  plan: string[];
  assignment: Record<string, string>;
  fast: Evaluation;
  refined?: Evaluation;
}

export interface AuditResult {
  kind: Kind;
  actual: Evaluation & { decision: string[] };
  optimal: Evaluation & { decision: string[] };
  gap: number;
  gap_pp: number;
  gap_pp_display: number;
  z: number;
  ranked: (OrderRow | PlanRow)[];
  config: Record<string, unknown>;
  corpus_hash: string;
  scenario_hash: string;
  seed: number;
  constraint_stats?: Record<string, number>;
}

export interface OptimizeResult {
  kind: Kind;
  optimal: Evaluation & { decision: string[] };
  ranked: (OrderRow | PlanRow)[];
  config: Record<string, unknown>;
  corpus_hash: string;
  scenario_hash: string;
  seed: number;
}

export type JobStatus = "queued" | "running" | "done" | "failed";

export interface JobSnapshot {
  job_id: string;
  kind: string;
  status: JobStatus;
  progress: { step: number; best_v_hat: number | null };
  result?: AuditResult | OptimizeResult;
  error?: string;
}

export interface ServiceError {
  error: string;
  details?: { field: string; message: string }[];
}
