// Client-side validation mirroring the CTM's server-side invariants, so a
// researcher sees field errors inline before any request is sent. The server
// remains the authority; this mirror must stay at least as strict on the
// rules it covers.

import type { Prompt, Study, TaskDefinition } from "./types.js";

export interface FieldProblem {
  field: string;
  reason: string;
}

const CHOICE_KINDS = new Set(["SingleChoice", "MultiChoice"]);

export function validatePrompt(prompt: Prompt, path: string): FieldProblem[] {
  const problems: FieldProblem[] = [];
  if (!prompt.prompt_id) {
    problems.push({ field: `${path}.prompt_id`, reason: "must be non-empty" });
  }
  if (CHOICE_KINDS.has(prompt.kind) && (prompt.options ?? []).length < 2) {
    problems.push({
      field: `${path}.options`,
      reason: "choice prompts need at least 2 options",
    });
  }
  if (prompt.kind === "SlidingScale") {
    const scale = prompt.scale;
    if (!scale) {
      problems.push({ field: `${path}.scale`, reason: "needs min, max, step" });
    } else {
      if (!(scale.min < scale.max)) {
        problems.push({ field: `${path}.scale`, reason: "min must be < max" });
      }
      if (!(scale.step > 0)) {
        problems.push({ field: `${path}.scale`, reason: "step must be > 0" });
      }
    }
  }
  if (prompt.kind === "AudioRecord" &&
      !(prompt.max_duration_s !== undefined && prompt.max_duration_s > 0)) {
    problems.push({
      field: `${path}.max_duration_s`,
      reason: "recordings need max_duration_s > 0",
    });
  }
  return problems;
}

export function validateTaskDefinition(td: TaskDefinition, path: string): FieldProblem[] {
  const problems: FieldProblem[] = [];
  if (!td.task_definition_id) {
    problems.push({ field: `${path}.task_definition_id`, reason: "must be non-empty" });
  }
  if (td.prompts.length === 0) {
    problems.push({ field: `${path}.prompts`, reason: "needs at least 1 prompt" });
  }
  const seen = new Set<string>();
  td.prompts.forEach((prompt, i) => {
    if (seen.has(prompt.prompt_id)) {
      problems.push({
        field: `${path}.prompts[${i}].prompt_id`,
        reason: `duplicate prompt_id '${prompt.prompt_id}'`,
      });
    }
    seen.add(prompt.prompt_id);
    problems.push(...validatePrompt(prompt, `${path}.prompts[${i}]`));
  });
  td.data_handlers.forEach((handler, i) => {
    if (!handler.namespace || !handler.job_name) {
      problems.push({
        field: `${path}.data_handlers[${i}]`,
        reason: "needs namespace and job_name",
      });
    }
  });
  return problems;
}

export function validateStudy(study: Study): FieldProblem[] {
  const problems: FieldProblem[] = [];
  if (!study.study_id) {
    problems.push({ field: "study_id", reason: "must be non-empty" });
  }
  const seen = new Set<string>();
  study.task_definitions.forEach((td, i) => {
    if (seen.has(td.task_definition_id)) {
      problems.push({
        field: `task_definitions[${i}]`,
        reason: `duplicate id '${td.task_definition_id}'`,
      });
    }
    seen.add(td.task_definition_id);
    problems.push(...validateTaskDefinition(td, `task_definitions[${i}]`));
  });
  const schedule = study.schedule;
  if ((schedule.mode === "Daily" || schedule.mode === "Weekly") && !schedule.at_time) {
    problems.push({ field: "schedule.at_time", reason: "needs HH:MM" });
  }
  if (schedule.mode === "Weekly" &&
      (schedule.weekday === undefined || schedule.weekday < 0 || schedule.weekday > 6)) {
    problems.push({ field: "schedule.weekday", reason: "needs weekday 0..6" });
  }
  if (schedule.mode === "EventDriven" && !schedule.event_name) {
    problems.push({ field: "schedule.event_name", reason: "needs event_name" });
  }
  return problems;
}

export function validateForActivation(study: Study): FieldProblem[] {
  const problems = validateStudy(study);
  if (!study.cohort_id) {
    problems.push({ field: "cohort_id", reason: "active study needs a cohort" });
  }
  if (study.task_definitions.length === 0) {
    problems.push({
      field: "task_definitions",
      reason: "active study needs at least 1 task definition",
    });
  }
  return problems;
}

// Canonical JSON: stable key order, no whitespace. Two study documents are
// the same configuration iff their canonical forms are byte-equal.
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .filter(([, v]) => v !== undefined)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => JSON.stringify(k) + ":" + canonicalJson(v));
  return "{" + entries.join(",") + "}";
}
