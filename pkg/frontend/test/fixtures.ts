// The API-built study fixture: byte-equivalence target for the builder flow
// (mirrors the platform test fixture exactly).

import type { Study, StudyProgress } from "../src/types.js";

export const AD_STUDY_FIXTURE: Study = {
  study_id: "study-ad",
  name: "AD assessment",
  description: "picture description with gender prompt",
  cohort_id: "cohort-1",
  schedule: { mode: "Once" },
  task_definitions: [
    {
      task_definition_id: "td-ad",
      title: "Cookie theft description",
      prompts: [
        {
          prompt_id: "q-gender",
          kind: "SingleChoice",
          text: "What is your gender?",
          options: ["Male", "Female"],
        },
        {
          prompt_id: "q-cookie",
          kind: "AudioRecord",
          text: "Describe the picture",
          max_duration_s: 60,
        },
      ],
      data_handlers: [{ namespace: "ad", job_name: "ad_assess" }],
    },
  ],
};

const REFERENCE = {
  word_count: { healthy_mean: 95, healthy_sd: 30, ad_mean: 70, ad_sd: 35 },
  speech_richness: { healthy_mean: 0.6, healthy_sd: 0.12, ad_mean: 0.45, ad_sd: 0.15 },
};

export function progressFixture(n = 5): StudyProgress {
  const participants = [];
  for (let i = 1; i <= n; i++) {
    participants.push({
      participant_id: `p${i}`,
      completed: 1,
      pending: 0,
      expired: 0,
      latest: {
        assignment_id: `asg-${i}`,
        task_definition_id: "td-ad",
        dataset_id: `ds-${i}`,
        results: [
          {
            task_id: `t-${i}`,
            namespace: "ad",
            job_name: "ad_assess",
            completed_at: 1000 + i,
            result: {
              mode: "Classification" as const,
              confidence_score: -0.5 + i * 0.1,
              features: { word_count: 16, speech_richness: 0.12 },
              feature_reference: REFERENCE,
              metadata: {},
            },
          },
        ],
      },
    });
  }
  return {
    study_id: "study-ad",
    status: "Active",
    participants,
    totals: { completed: n, pending: 0, expired: 0 },
  };
}
