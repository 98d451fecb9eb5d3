// Mirrors of the documented JSON formats (docs/schemas in the platform repo).

export type PromptKind =
  | "SingleChoice"
  | "MultiChoice"
  | "SlidingScale"
  | "TextEntry"
  | "AudioRecord"
  | "VideoRecord"
  | "ImageDisplay";

export const PROMPT_KINDS: PromptKind[] = [
  "SingleChoice", "MultiChoice", "SlidingScale", "TextEntry",
  "AudioRecord", "VideoRecord", "ImageDisplay",
];

export interface Scale {
  min: number;
  max: number;
  step: number;
}

export interface Prompt {
  prompt_id: string;
  kind: PromptKind;
  text: string;
  options?: string[];
  scale?: Scale;
  max_duration_s?: number;
}

export interface DataHandler {
  namespace: string;
  job_name: string;
}

export interface TaskDefinition {
  task_definition_id: string;
  title: string;
  prompts: Prompt[];
  data_handlers: DataHandler[];
}

export type ScheduleMode = "Once" | "Daily" | "Weekly" | "EventDriven";

export interface Schedule {
  mode: ScheduleMode;
  at_time?: string;
  weekday?: number;
  event_name?: string;
}

export interface Study {
  study_id: string;
  name: string;
  description: string;
  cohort_id: string | null;
  schedule: Schedule;
  task_definitions: TaskDefinition[];
  status?: "Draft" | "Active" | "Closed";
  activated_at?: number | null;
}

export interface Cohort {
  cohort_id: string;
  name: string;
  participant_ids: string[];
}

export interface ReferenceEntry {
  healthy_mean: number;
  healthy_sd: number;
  ad_mean: number;
  ad_sd: number;
}

export interface ScoreReport {
  mode: "Classification" | "MMSE" | "Onset85";
  confidence_score?: number;
  mmse_estimate?: number;
  onset_probability?: number;
  onset_before_85?: boolean;
  features: Record<string, number>;
  feature_reference: Record<string, ReferenceEntry>;
  metadata: Record<string, unknown>;
}

export interface ResultSummary {
  task_id: string;
  namespace: string;
  job_name: string;
  result: ScoreReport | Record<string, unknown>;
  completed_at: number;
}

export interface ParticipantProgress {
  participant_id: string;
  completed: number;
  pending: number;
  expired: number;
  latest: {
    assignment_id: string;
    task_definition_id: string;
    dataset_id: string | null;
    results: ResultSummary[];
  } | null;
}

export interface StudyProgress {
  study_id: string;
  status: string;
  participants: ParticipantProgress[];
  totals: { completed: number; pending: number; expired: number };
}

export interface DiscoveredWorker {
  worker_id: string;
  jobs: string[];
  last_heartbeat: number;
}

export interface DashboardConfig {
  ctmUrl: string;
  gatewayUrl: string;
  dispatcherUrl: string;
  token?: string;
  namespaces: string[];
  refreshIntervalS: number;
}
