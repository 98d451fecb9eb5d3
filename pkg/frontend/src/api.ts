// API client. Every request funnels through one gate that rejects any path
// not in the documented endpoint list, so the dashboard cannot grow private
// API dependencies: the platform stays fully operable without it.

import type {
  Cohort,
  DashboardConfig,
  DiscoveredWorker,
  Study,
  StudyProgress,
} from "./types.js";

type Service = "ctm" | "gateway" | "dispatcher";

interface EndpointRule {
  service: Service;
  method: string;
  pattern: RegExp;
}

// The documented surface (docs/api.md). Order is irrelevant; first match wins.
export const DOCUMENTED_ENDPOINTS: EndpointRule[] = [
  { service: "ctm", method: "POST", pattern: /^\/api\/v1\/studies$/ },
  { service: "ctm", method: "GET", pattern: /^\/api\/v1\/studies$/ },
  { service: "ctm", method: "GET", pattern: /^\/api\/v1\/studies\/[^/]+$/ },
  { service: "ctm", method: "PATCH", pattern: /^\/api\/v1\/studies\/[^/]+$/ },
  { service: "ctm", method: "GET", pattern: /^\/api\/v1\/studies\/[^/]+\/progress$/ },
  { service: "ctm", method: "GET", pattern: /^\/api\/v1\/studies\/[^/]+\/assignments$/ },
  { service: "ctm", method: "POST", pattern: /^\/api\/v1\/cohorts$/ },
  { service: "ctm", method: "GET", pattern: /^\/api\/v1\/cohorts$/ },
  { service: "ctm", method: "GET", pattern: /^\/api\/v1\/cohorts\/[^/]+$/ },
  { service: "ctm", method: "PATCH", pattern: /^\/api\/v1\/cohorts\/[^/]+$/ },
  { service: "ctm", method: "GET", pattern: /^\/api\/v1\/participants\/[^/]+\/assignments$/ },
  { service: "ctm", method: "POST", pattern: /^\/api\/v1\/assignments\/[^/]+\/complete$/ },
  { service: "ctm", method: "POST", pattern: /^\/api\/v1\/events$/ },
  { service: "gateway", method: "POST", pattern: /^\/api\/v1\/jobs$/ },
  { service: "gateway", method: "GET", pattern: /^\/api\/v1\/results\/[^/]+$/ },
  { service: "gateway", method: "POST", pattern: /^\/api\/v1\/ingress$/ },
  { service: "dispatcher", method: "GET", pattern: /^\/api\/v1\/discovery\/[^/]+$/ },
];

export class UndocumentedEndpointError extends Error {}

export class ApiError extends Error {
  constructor(public status: number, message: string,
              public fields?: { field: string; reason: string }[]) {
    super(message);
  }
}

export interface RequestLogEntry {
  service: Service;
  method: string;
  path: string;
}

type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly requestLog: RequestLogEntry[] = [];

  constructor(private config: DashboardConfig,
              private fetchImpl: FetchLike = (url, init) => fetch(url, init)) {}

  private baseUrl(service: Service): string {
    if (service === "ctm") return this.config.ctmUrl;
    if (service === "gateway") return this.config.gatewayUrl;
    return this.config.dispatcherUrl;
  }

  private async request<T>(service: Service, method: string, path: string,
                           body?: unknown): Promise<T> {
    const pathOnly = path.split("?")[0];
    const allowed = DOCUMENTED_ENDPOINTS.some(
      (rule) => rule.service === service && rule.method === method &&
        rule.pattern.test(pathOnly));
    if (!allowed) {
      throw new UndocumentedEndpointError(
        `${method} ${service}:${pathOnly} is not a documented endpoint`);
    }
    this.requestLog.push({ service, method, path: pathOnly });
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.config.token) {
      headers["Authorization"] = `Bearer ${this.config.token}`;
    }
    const resp = await this.fetchImpl(this.baseUrl(service) + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) {
      let detail = `HTTP ${resp.status}`;
      let fields;
      try {
        const parsed = await resp.json();
        detail = parsed.detail ?? detail;
        fields = parsed.fields;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail, fields);
    }
    if (resp.status === 204) {
      return undefined as T;
    }
    return (await resp.json()) as T;
  }

  // -- CTM --------------------------------------------------------------

  createStudy(doc: Study): Promise<Study> {
    return this.request("ctm", "POST", "/api/v1/studies", doc);
  }

  listStudies(): Promise<{ studies: Study[] }> {
    return this.request("ctm", "GET", "/api/v1/studies");
  }

  getStudy(studyId: string): Promise<Study> {
    return this.request("ctm", "GET", `/api/v1/studies/${encodeURIComponent(studyId)}`);
  }

  updateStudy(studyId: string, patch: Partial<Study> & { status?: string }): Promise<Study> {
    return this.request("ctm", "PATCH",
      `/api/v1/studies/${encodeURIComponent(studyId)}`, patch);
  }

  activateStudy(studyId: string): Promise<Study> {
    return this.updateStudy(studyId, { status: "Active" });
  }

  studyProgress(studyId: string): Promise<StudyProgress> {
    return this.request("ctm", "GET",
      `/api/v1/studies/${encodeURIComponent(studyId)}/progress`);
  }

  createCohort(doc: Cohort): Promise<Cohort> {
    return this.request("ctm", "POST", "/api/v1/cohorts", doc);
  }

  listCohorts(): Promise<{ cohorts: Cohort[] }> {
    return this.request("ctm", "GET", "/api/v1/cohorts");
  }

  fireEvent(eventName: string, cohortId: string): Promise<{ created: number }> {
    return this.request("ctm", "POST", "/api/v1/events",
      { event_name: eventName, cohort_id: cohortId });
  }

  // -- dispatcher (read-only discovery for the handler dropdown) -----------

  discover(namespace: string): Promise<{ workers: DiscoveredWorker[] }> {
    return this.request("dispatcher", "GET",
      `/api/v1/discovery/${encodeURIComponent(namespace)}`);
  }

  async discoverHandlers(namespaces: string[]):
      Promise<{ namespace: string; job_name: string }[]> {
    const found: { namespace: string; job_name: string }[] = [];
    for (const namespace of namespaces) {
      try {
        const { workers } = await this.discover(namespace);
        for (const worker of workers) {
          for (const job of worker.jobs) {
            if (!found.some((h) => h.namespace === namespace && h.job_name === job)) {
              found.push({ namespace, job_name: job });
            }
          }
        }
      } catch {
        // a namespace with no dispatcher reachable just contributes nothing
      }
    }
    return found;
  }
}
