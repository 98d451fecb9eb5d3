import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, DOCUMENTED_ENDPOINTS, UndocumentedEndpointError }
  from "../src/api.js";
import type { DashboardConfig } from "../src/types.js";
import { AD_STUDY_FIXTURE } from "./fixtures.js";

const CONFIG: DashboardConfig = {
  ctmUrl: "http://ctm.test",
  gatewayUrl: "http://gw.test",
  dispatcherUrl: "http://disp.test",
  token: "sekrit",
  namespaces: ["ad"],
  refreshIntervalS: 10,
};

interface Recorded {
  url: string;
  method: string;
  body?: string;
  headers: Record<string, string>;
}

function mockFetch(routes: Record<string, unknown> = {}) {
  const calls: Recorded[] = [];
  const impl = async (url: string, init: RequestInit): Promise<Response> => {
    calls.push({
      url,
      method: init.method ?? "GET",
      body: init.body as string | undefined,
      headers: init.headers as Record<string, string>,
    });
    const key = `${init.method} ${url}`;
    const hit = Object.entries(routes).find(([k]) => key.includes(k));
    const body = hit ? hit[1] : {};
    return new Response(JSON.stringify(body), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { calls, impl };
}

describe("endpoint discipline (API parity)", () => {
  it("every client call goes to a documented endpoint", async () => {
    const { calls, impl } = mockFetch({
      "/api/v1/studies": { studies: [] },
      "/api/v1/cohorts": { cohorts: [] },
      "/api/v1/events": { created: 0 },
      "/api/v1/discovery": { workers: [] },
    });
    const api = new ApiClient(CONFIG, impl);

    await api.createStudy(AD_STUDY_FIXTURE);
    await api.listStudies();
    await api.getStudy("study-ad");
    await api.updateStudy("study-ad", { name: "renamed" });
    await api.activateStudy("study-ad");
    await api.studyProgress("study-ad");
    await api.createCohort({ cohort_id: "c", name: "c", participant_ids: [] });
    await api.listCohorts();
    await api.fireEvent("fall_detected", "cohort-1");
    await api.discover("ad");
    await api.discoverHandlers(["ad"]);

    expect(calls.length).toBe(api.requestLog.length);
    for (const entry of api.requestLog) {
      const documented = DOCUMENTED_ENDPOINTS.some(
        (rule) => rule.service === entry.service && rule.method === entry.method &&
          rule.pattern.test(entry.path));
      expect(documented, `${entry.method} ${entry.path}`).toBe(true);
    }
  });

  it("an undocumented path is refused before any request is made", async () => {
    const { calls, impl } = mockFetch();
    const api = new ApiClient(CONFIG, impl);
    const sneaky = api as unknown as {
      request: (s: string, m: string, p: string) => Promise<unknown>;
    };
    await expect(sneaky.request["call"](sneaky, "ctm", "DELETE", "/api/v1/studies/x"))
      .rejects.toThrow(UndocumentedEndpointError);
    await expect(sneaky.request["call"](sneaky, "ctm", "GET", "/internal/debug"))
      .rejects.toThrow(UndocumentedEndpointError);
    expect(calls).toHaveLength(0);
  });

  it("sends the bearer token and routes to the right base URL", async () => {
    const { calls, impl } = mockFetch({ "/api/v1/discovery": { workers: [] } });
    const api = new ApiClient(CONFIG, impl);
    await api.discover("ad");
    expect(calls[0].url).toBe("http://disp.test/api/v1/discovery/ad");
    expect(calls[0].headers["Authorization"]).toBe("Bearer sekrit");
  });
});

describe("error handling", () => {
  it("carries field-level validation reasons", async () => {
    const impl = async () => new Response(JSON.stringify({
      error: "ValidationFailed",
      detail: "options: choice prompts need at least 2 options",
      fields: [{ field: "task_definitions[0].prompts[0].options",
                 reason: "choice prompts need at least 2 options" }],
    }), { status: 400 });
    const api = new ApiClient(CONFIG, impl);
    const err = await api.createStudy(AD_STUDY_FIXTURE).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(400);
    expect(err.fields[0].field).toContain("options");
  });

  it("activation round-trip issues exactly create + patch", async () => {
    const { calls, impl } = mockFetch({ "/api/v1/studies": AD_STUDY_FIXTURE });
    const api = new ApiClient(CONFIG, impl);
    await api.createStudy(AD_STUDY_FIXTURE);
    await api.activateStudy("study-ad");
    expect(calls.map((c) => `${c.method} ${c.url}`)).toEqual([
      "POST http://ctm.test/api/v1/studies",
      "PATCH http://ctm.test/api/v1/studies/study-ad",
    ]);
    expect(JSON.parse(calls[1].body!)).toEqual({ status: "Active" });
  });

  it("discoverHandlers aggregates jobs across namespaces and dedupes", async () => {
    const impl = async (url: string) => new Response(JSON.stringify(
      url.includes("/ad")
        ? { workers: [{ worker_id: "w1", jobs: ["ad_assess", "mmse_estimate"],
                        last_heartbeat: 0 },
                      { worker_id: "w2", jobs: ["ad_assess"], last_heartbeat: 0 }] }
        : { workers: [] },
    ), { status: 200 });
    const api = new ApiClient(CONFIG, impl);
    const handlers = await api.discoverHandlers(["ad", "other"]);
    expect(handlers).toEqual([
      { namespace: "ad", job_name: "ad_assess" },
      { namespace: "ad", job_name: "mmse_estimate" },
    ]);
  });
});
