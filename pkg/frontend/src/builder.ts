// Study builder: local editing state plus the document assembly that goes to
// POST /api/v1/studies. No business logic beyond validation mirroring; the
// CTM is the authority.

import type {
  DataHandler,
  Prompt,
  PromptKind,
  Schedule,
  Study,
  TaskDefinition,
} from "./types.js";
import { FieldProblem, validateStudy } from "./validation.js";

export interface BuilderState {
  study_id: string;
  name: string;
  description: string;
  cohort_id: string | null;
  schedule: Schedule;
  task_definitions: TaskDefinition[];
}

export function emptyState(): BuilderState {
  return {
    study_id: "",
    name: "",
    description: "",
    cohort_id: null,
    schedule: { mode: "Once" },
    task_definitions: [],
  };
}

export function addTaskDefinition(state: BuilderState, id: string, title: string): void {
  state.task_definitions.push({
    task_definition_id: id,
    title,
    prompts: [],
    data_handlers: [],
  });
}

export function addPrompt(state: BuilderState, tdIndex: number, kind: PromptKind,
                          promptId: string, text: string): Prompt {
  const prompt: Prompt = { prompt_id: promptId, kind, text };
  if (kind === "SingleChoice" || kind === "MultiChoice") {
    prompt.options = [];
  }
  if (kind === "SlidingScale") {
    prompt.scale = { min: 0, max: 10, step: 1 };
  }
  if (kind === "AudioRecord" || kind === "VideoRecord") {
    prompt.max_duration_s = 60;
  }
  state.task_definitions[tdIndex].prompts.push(prompt);
  return prompt;
}

export function attachHandler(state: BuilderState, tdIndex: number,
                              handler: DataHandler): void {
  const handlers = state.task_definitions[tdIndex].data_handlers;
  if (!handlers.some((h) => h.namespace === handler.namespace &&
                            h.job_name === handler.job_name)) {
    handlers.push(handler);
  }
}

// The exact JSON document the CTM API receives: undefined-valued optional
// fields are dropped so the wire form is reproducible.
export function buildStudyDoc(state: BuilderState): Study {
  const schedule: Schedule = { mode: state.schedule.mode };
  if (state.schedule.at_time !== undefined) schedule.at_time = state.schedule.at_time;
  if (state.schedule.weekday !== undefined) schedule.weekday = state.schedule.weekday;
  if (state.schedule.event_name !== undefined) {
    schedule.event_name = state.schedule.event_name;
  }
  return {
    study_id: state.study_id,
    name: state.name,
    description: state.description,
    cohort_id: state.cohort_id,
    schedule,
    task_definitions: state.task_definitions.map((td) => ({
      task_definition_id: td.task_definition_id,
      title: td.title,
      prompts: td.prompts.map((p) => {
        const out: Prompt = { prompt_id: p.prompt_id, kind: p.kind, text: p.text };
        if (p.options !== undefined) out.options = [...p.options];
        if (p.scale !== undefined) out.scale = { ...p.scale };
        if (p.max_duration_s !== undefined) out.max_duration_s = p.max_duration_s;
        return out;
      }),
      data_handlers: td.data_handlers.map((h) => ({ ...h })),
    })),
  };
}

export function validateState(state: BuilderState): FieldProblem[] {
  return validateStudy(buildStudyDoc(state));
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function promptDetails(prompt: Prompt): string {
  switch (prompt.kind) {
    case "SingleChoice":
    case "MultiChoice":
      return `options: ${(prompt.options ?? []).map(esc).join(" | ") || "(none yet)"}`;
    case "SlidingScale": {
      const s = prompt.scale;
      return s ? `scale ${s.min}..${s.max} step ${s.step}` : "scale unset";
    }
    case "AudioRecord":
    case "VideoRecord":
      return `max ${prompt.max_duration_s ?? "?"}s`;
    default:
      return "";
  }
}

export function renderProblems(problems: FieldProblem[]): string {
  if (problems.length === 0) return "";
  const items = problems
    .map((p) => `<li><code>${esc(p.field)}</code>: ${esc(p.reason)}</li>`)
    .join("");
  return `<ul class="field-errors">${items}</ul>`;
}

export function renderBuilder(state: BuilderState, problems: FieldProblem[],
                              handlers: DataHandler[]): string {
  const tds = state.task_definitions.map((td, ti) => {
    const prompts = td.prompts.map((p, pi) => `
      <li class="prompt">
        <span class="kind">${p.kind}</span>
        <strong>${esc(p.prompt_id)}</strong> ${esc(p.text)}
        <em>${promptDetails(p)}</em>
        <button data-action="remove-prompt" data-td="${ti}" data-prompt="${pi}">remove</button>
      </li>`).join("");
    const attached = td.data_handlers
      .map((h) => `<span class="chip">${esc(h.namespace)}/${esc(h.job_name)}</span>`)
      .join(" ");
    const options = handlers
      .map((h) => `<option value="${esc(h.namespace)}|${esc(h.job_name)}">` +
        `${esc(h.namespace)}/${esc(h.job_name)}</option>`)
      .join("");
    return `
    <fieldset class="task-definition" data-td="${ti}">
      <legend>${esc(td.task_definition_id)} — ${esc(td.title)}</legend>
      <ol class="prompts">${prompts}</ol>
      <div class="add-prompt">
        <select data-role="prompt-kind">
          ${["SingleChoice", "MultiChoice", "SlidingScale", "TextEntry",
             "AudioRecord", "VideoRecord", "ImageDisplay"]
            .map((k) => `<option>${k}</option>`).join("")}
        </select>
        <input data-role="prompt-id" placeholder="prompt id">
        <input data-role="prompt-text" placeholder="prompt text">
        <button data-action="add-prompt" data-td="${ti}">add prompt</button>
      </div>
      <div class="handlers">
        data handlers: ${attached || "<em>none (collect-only)</em>"}
        <select data-role="handler-pick">${options ||
          "<option value=''>no workers discovered</option>"}</select>
        <button data-action="attach-handler" data-td="${ti}">attach</button>
      </div>
    </fieldset>`;
  }).join("");

  return `
  <section class="builder">
    <h2>Study builder</h2>
    <label>study id <input data-field="study_id" value="${esc(state.study_id)}"></label>
    <label>name <input data-field="name" value="${esc(state.name)}"></label>
    <label>description <input data-field="description"
      value="${esc(state.description)}"></label>
    <label>cohort <input data-field="cohort_id" value="${esc(state.cohort_id ?? "")}"></label>
    <label>schedule
      <select data-field="schedule-mode">
        ${["Once", "Daily", "Weekly", "EventDriven"].map((m) =>
          `<option${state.schedule.mode === m ? " selected" : ""}>${m}</option>`).join("")}
      </select>
      <input data-field="schedule-at-time" placeholder="HH:MM"
        value="${esc(state.schedule.at_time ?? "")}">
      <input data-field="schedule-weekday" placeholder="weekday 0-6"
        value="${state.schedule.weekday ?? ""}">
      <input data-field="schedule-event" placeholder="event name"
        value="${esc(state.schedule.event_name ?? "")}">
    </label>
    ${tds}
    <div class="builder-actions">
      <input data-role="td-id" placeholder="task definition id">
      <input data-role="td-title" placeholder="title">
      <button data-action="add-td">add task definition</button>
      <button data-action="save-draft">save draft</button>
      <button data-action="activate">activate</button>
    </div>
    ${renderProblems(problems)}
  </section>`;
}
