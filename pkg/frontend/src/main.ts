// Browser bootstrap: config load, tab wiring, builder event delegation, and
// the progress poller. All state mutation goes through builder.ts/api.ts so
// the testable core stays DOM-free.

import { ApiClient, ApiError } from "./api.js";
import {
  BuilderState,
  addPrompt,
  addTaskDefinition,
  attachHandler,
  buildStudyDoc,
  emptyState,
  renderBuilder,
  validateState,
} from "./builder.js";
import { ProgressPoller, renderProgressBoard } from "./progress.js";
import type { DashboardConfig, DataHandler, PromptKind } from "./types.js";
import { validateForActivation } from "./validation.js";

async function loadConfig(): Promise<DashboardConfig> {
  const resp = await fetch("./config.json");
  return (await resp.json()) as DashboardConfig;
}

function el<T extends HTMLElement>(selector: string): T {
  const found = document.querySelector(selector);
  if (!found) throw new Error(`missing element ${selector}`);
  return found as T;
}

class Dashboard {
  state: BuilderState = emptyState();
  handlers: DataHandler[] = [];
  poller: ProgressPoller | null = null;
  notice = "";

  constructor(private api: ApiClient, private config: DashboardConfig) {}

  async start(): Promise<void> {
    this.handlers = await this.api.discoverHandlers(this.config.namespaces);
    this.renderBuilderPane();
    this.bindBuilderEvents();
    this.bindProgressEvents();
  }

  renderBuilderPane(problems = validateState(this.state)): void {
    el("#builder-pane").innerHTML =
      (this.notice ? `<div class="notice">${this.notice}</div>` : "") +
      renderBuilder(this.state, problems, this.handlers);
  }

  private readField(selector: string): string {
    return (el<HTMLInputElement>(selector)).value.trim();
  }

  private syncFields(): void {
    this.state.study_id = this.readField('[data-field="study_id"]');
    this.state.name = this.readField('[data-field="name"]');
    this.state.description = this.readField('[data-field="description"]');
    const cohort = this.readField('[data-field="cohort_id"]');
    this.state.cohort_id = cohort || null;
    const mode = (el<HTMLSelectElement>('[data-field="schedule-mode"]')).value;
    this.state.schedule = { mode: mode as BuilderState["schedule"]["mode"] };
    const atTime = this.readField('[data-field="schedule-at-time"]');
    if (atTime) this.state.schedule.at_time = atTime;
    const weekday = this.readField('[data-field="schedule-weekday"]');
    if (weekday) this.state.schedule.weekday = Number(weekday);
    const eventName = this.readField('[data-field="schedule-event"]');
    if (eventName) this.state.schedule.event_name = eventName;
  }

  bindBuilderEvents(): void {
    el("#builder-pane").addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      const action = target.dataset.action;
      if (!action) return;
      this.syncFields();
      if (action === "add-td") {
        addTaskDefinition(this.state, this.readField('[data-role="td-id"]'),
          this.readField('[data-role="td-title"]'));
        this.renderBuilderPane();
      } else if (action === "add-prompt") {
        const ti = Number(target.dataset.td);
        const fieldset = target.closest("fieldset")!;
        const kind = (fieldset.querySelector('[data-role="prompt-kind"]') as
          HTMLSelectElement).value as PromptKind;
        const id = (fieldset.querySelector('[data-role="prompt-id"]') as
          HTMLInputElement).value.trim();
        const text = (fieldset.querySelector('[data-role="prompt-text"]') as
          HTMLInputElement).value.trim();
        addPrompt(this.state, ti, kind, id, text);
        this.renderBuilderPane();
      } else if (action === "remove-prompt") {
        const ti = Number(target.dataset.td);
        this.state.task_definitions[ti].prompts.splice(
          Number(target.dataset.prompt), 1);
        this.renderBuilderPane();
      } else if (action === "attach-handler") {
        const ti = Number(target.dataset.td);
        const fieldset = target.closest("fieldset")!;
        const value = (fieldset.querySelector('[data-role="handler-pick"]') as
          HTMLSelectElement).value;
        if (value) {
          const [namespace, job] = value.split("|");
          attachHandler(this.state, ti, { namespace, job_name: job });
        }
        this.renderBuilderPane();
      } else if (action === "save-draft") {
        void this.saveDraft();
      } else if (action === "activate") {
        void this.activate();
      }
    });
  }

  async saveDraft(): Promise<boolean> {
    const problems = validateState(this.state);
    if (problems.length > 0) {
      this.renderBuilderPane(problems);  // inline errors; nothing is sent
      return false;
    }
    try {
      await this.api.createStudy(buildStudyDoc(this.state));
      this.notice = `saved draft ${this.state.study_id}`;
      this.renderBuilderPane();
      return true;
    } catch (error) {
      this.notice = "";
      this.renderBuilderPane(this.problemsFrom(error));
      return false;
    }
  }

  async activate(): Promise<boolean> {
    const problems = validateForActivation(buildStudyDoc(this.state));
    const collectOnly = this.state.task_definitions.every(
      (td) => td.data_handlers.length === 0);
    if (problems.length > 0) {
      this.renderBuilderPane(problems);
      return false;
    }
    if (!(await this.saveDraft())) return false;
    try {
      await this.api.activateStudy(this.state.study_id);
      this.notice = `activated ${this.state.study_id}` +
        (collectOnly ? " (collect-only: no data handlers attached)" : "");
      this.renderBuilderPane();
      return true;
    } catch (error) {
      this.renderBuilderPane(this.problemsFrom(error));
      return false;
    }
  }

  private problemsFrom(error: unknown) {
    if (error instanceof ApiError && error.fields) return error.fields;
    return [{ field: "request", reason: String(error) }];
  }

  bindProgressEvents(): void {
    el("#watch-form").addEventListener("submit", (event) => {
      event.preventDefault();
      const studyId = (el<HTMLInputElement>("#watch-study")).value.trim();
      if (!studyId) return;
      this.poller?.stop();
      this.poller = new ProgressPoller(
        () => this.api.studyProgress(studyId),
        (progress, stale) => {
          el("#progress-pane").innerHTML = renderProgressBoard(progress, stale);
        },
        this.config.refreshIntervalS * 1000,
      );
      this.poller.start();
    });
    el("#fire-form").addEventListener("submit", (event) => {
      event.preventDefault();
      const eventName = (el<HTMLInputElement>("#fire-event")).value.trim();
      const cohortId = (el<HTMLInputElement>("#fire-cohort")).value.trim();
      void this.api.fireEvent(eventName, cohortId).then(({ created }) => {
        el("#fire-outcome").textContent = `created ${created} assignment(s)`;
      });
    });
  }
}

export async function boot(): Promise<void> {
  const config = await loadConfig();
  const api = new ApiClient(config);
  const dashboard = new Dashboard(api, config);
  await dashboard.start();
}

if (typeof document !== "undefined" && document.getElementById("builder-pane")) {
  void boot();
}
