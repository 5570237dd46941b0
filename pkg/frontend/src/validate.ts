/**
 * Client-side validation mirroring the service's scenario schema, so the
 * editor can warn inline before a request is ever sent. The service remains
 * the authority; anything it rejects is rendered from its 400/422 payload.
 */

import type { Scenario } from "./types.js";

export interface Issue {
  field: string;
  message: string;
  severity: "error" | "warning";
}

const BALLS_PER_OVER = 6;
const BALLS_PER_INNINGS = 120;

export function validateScenario(s: Scenario): Issue[] {
  const issues: Issue[] = [];
  const err = (field: string, message: string) =>
    issues.push({ field, message, severity: "error" });
  const warn = (field: string, message: string) =>
    issues.push({ field, message, severity: "warning" });

  if (s.kind !== "batting" && s.kind !== "bowling") {
    err("kind", `kind must be batting or bowling, got ${String(s.kind)}`);
    return issues;
  }
  const iv = s.intervention;
  if (!iv) {
    err("intervention", "intervention (runs, balls, wickets) is required");
    return issues;
  }
  if (!Number.isInteger(iv.runs) || iv.runs < 1) {
    err("intervention.runs", "runs remaining must be a positive integer");
  }
  if (iv.balls === 0) {
    warn("intervention.balls", "terminal state: no balls remaining, nothing to decide");
  } else if (!Number.isInteger(iv.balls) || iv.balls < 1 || iv.balls > BALLS_PER_INNINGS) {
    err("intervention.balls", `balls remaining must be in 1..${BALLS_PER_INNINGS}`);
  }
  if (!Number.isInteger(iv.wickets) || iv.wickets < 1 || iv.wickets > 10) {
    err("intervention.wickets", "wickets in hand must be in 1..10");
  }

  if (s.kind === "batting") {
    if (!s.pool || s.pool.length === 0) {
      err("pool", "the batting pool must name at least one batsman");
    } else {
      if (new Set(s.pool).size !== s.pool.length) {
        err("pool", "pool contains a duplicate batsman");
      }
      for (const name of s.pool) {
        if (!s.players?.[name]) {
          err(`players.${name}`, `no profile for pool batsman ${name}`);
        }
      }
    }
    if (!s.fixed_non_striker) {
      err("fixed_non_striker", "the surviving non-striker must be named");
    } else if (!s.players?.[s.fixed_non_striker]) {
      err(`players.${s.fixed_non_striker}`, `no profile for ${s.fixed_non_striker}`);
    }
    if (s.actual_decision && s.pool) {
      const a = [...s.actual_decision].sort().join("|");
      const b = [...s.pool].sort().join("|");
      if (a !== b) {
        err("actual_decision", "actual decision must be a permutation of the pool");
      }
    }
  } else {
    const slots = s.slots ?? [];
    if (slots.length === 0) {
      err("slots", "at least one over slot is required");
    } else {
      if (iv.balls !== BALLS_PER_OVER * slots.length) {
        err("slots", `${slots.length} slots do not cover ${iv.balls} balls`);
      }
      for (let i = 1; i < slots.length; i++) {
        if (slots[i] !== slots[i - 1] + 1) {
          err("slots", "over slots must be contiguous");
          break;
        }
      }
    }
    const bowlers = s.bowlers ?? {};
    const names = Object.keys(bowlers);
    if (names.length === 0) {
      err("bowlers", "at least one bowler is required");
    }
    let quotaSum = 0;
    for (const name of names) {
      const q = bowlers[name].quota;
      if (!Number.isInteger(q) || q < 0 || q > 4) {
        err(`bowlers.${name}.quota`, `quota must be in 0..4, got ${q}`);
      } else {
        quotaSum += q;
      }
    }
    if (names.length > 0 && quotaSum < slots.length) {
      warn(
        "bowlers",
        `infeasible: total quota ${quotaSum} cannot fill ${slots.length} over slots`,
      );
    }
    if (s.actual_decision) {
      if (s.actual_decision.length !== slots.length) {
        err("actual_decision", "actual plan must assign exactly one bowler per slot");
      }
      for (let i = 1; i < s.actual_decision.length; i++) {
        if (s.actual_decision[i] === s.actual_decision[i - 1]) {
          err("actual_decision", `${s.actual_decision[i]} bowls consecutive overs`);
          break;
        }
      }
      if (s.prev_bowler && s.actual_decision[0] === s.prev_bowler) {
        err("actual_decision", `${s.prev_bowler} bowled the previous over`);
      }
    }
  }
  return issues;
}
