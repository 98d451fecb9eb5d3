"""Shared fixtures: the two-prompt assessment study and its cohort."""

from __future__ import annotations

COOKIE_THEFT_TEXT = (
    "the boy on the stool steals a cookie from the cookie jar "
    "while the sink overflows"
)


def ad_study_doc(study_id="study-ad", cohort_id="cohort-1",
                 schedule=None, handlers=None) -> dict:
    return {
        "study_id": study_id,
        "name": "AD assessment",
        "description": "picture description with gender prompt",
        "cohort_id": cohort_id,
        "schedule": schedule or {"mode": "Once"},
        "task_definitions": [
            {
                "task_definition_id": "td-ad",
                "title": "Cookie theft description",
                "prompts": [
                    {"prompt_id": "q-gender", "kind": "SingleChoice",
                     "text": "What is your gender?", "options": ["Male", "Female"]},
                    {"prompt_id": "q-cookie", "kind": "AudioRecord",
                     "text": "Describe the picture", "max_duration_s": 60},
                ],
                "data_handlers": handlers if handlers is not None
                else [{"namespace": "ad", "job_name": "ad_assess"}],
            }
        ],
    }


def cohort_doc(cohort_id="cohort-1", n=5) -> dict:
    return {
        "cohort_id": cohort_id,
        "name": "pilot cohort",
        "participant_ids": [f"p{i}" for i in range(1, n + 1)],
    }
