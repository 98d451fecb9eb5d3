import { describe, expect, it } from "vitest";

import { canonicalJson, validateForActivation, validatePrompt, validateStudy }
  from "../src/validation.js";
import type { Prompt, Study } from "../src/types.js";
import { AD_STUDY_FIXTURE } from "./fixtures.js";

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

describe("prompt validation mirrors the server invariants", () => {
  it("accepts the fixture prompts", () => {
    for (const prompt of AD_STUDY_FIXTURE.task_definitions[0].prompts) {
      expect(validatePrompt(prompt, "p")).toEqual([]);
    }
  });

  it("rejects a choice prompt with fewer than two options", () => {
    const prompt: Prompt = { prompt_id: "q", kind: "SingleChoice", text: "?",
                             options: ["only"] };
    const problems = validatePrompt(prompt, "p");
    expect(problems.some((p) => p.field === "p.options")).toBe(true);
  });

  it("rejects an invalid slider without sending anything", () => {
    const prompt: Prompt = { prompt_id: "q", kind: "SlidingScale", text: "?",
                             scale: { min: 5, max: 5, step: 1 } };
    const problems = validatePrompt(prompt, "p");
    expect(problems.map((p) => p.reason)).toContain("min must be < max");
  });

  it("rejects zero step and missing audio duration", () => {
    expect(validatePrompt({ prompt_id: "q", kind: "SlidingScale", text: "?",
                            scale: { min: 0, max: 1, step: 0 } }, "p")
      .some((p) => p.reason === "step must be > 0")).toBe(true);
    expect(validatePrompt({ prompt_id: "q", kind: "AudioRecord", text: "?" }, "p")
      .some((p) => p.field === "p.max_duration_s")).toBe(true);
  });
});

describe("study validation", () => {
  it("accepts the fixture", () => {
    expect(validateStudy(AD_STUDY_FIXTURE)).toEqual([]);
    expect(validateForActivation(AD_STUDY_FIXTURE)).toEqual([]);
  });

  it("requires a cohort for activation but not for drafts", () => {
    const draft = clone(AD_STUDY_FIXTURE);
    draft.cohort_id = null;
    expect(validateStudy(draft)).toEqual([]);
    expect(validateForActivation(draft).some((p) => p.field === "cohort_id")).toBe(true);
  });

  it("flags duplicate prompt ids and schedule gaps", () => {
    const broken = clone(AD_STUDY_FIXTURE);
    broken.task_definitions[0].prompts[1].prompt_id = "q-gender";
    expect(validateStudy(broken).some((p) => p.reason.includes("duplicate"))).toBe(true);

    const weekly: Study = { ...clone(AD_STUDY_FIXTURE),
                            schedule: { mode: "Weekly", at_time: "09:00" } };
    expect(validateStudy(weekly).some((p) => p.field === "schedule.weekday")).toBe(true);
  });
});

describe("canonical JSON", () => {
  it("is key-order independent", () => {
    expect(canonicalJson({ b: 1, a: [{ y: 2, x: 3 }] }))
      .toBe(canonicalJson({ a: [{ x: 3, y: 2 }], b: 1 }));
  });

  it("drops undefined-valued keys", () => {
    expect(canonicalJson({ a: 1, b: undefined })).toBe('{"a":1}');
  });
});
