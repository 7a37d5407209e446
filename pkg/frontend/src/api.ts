/** Typed client for the session-service JSON API.
 *
 * Metric values are carried as the exact decimal strings the service
 * serialized (see rawjson.ts); numeric parsing happens only inside chart
 * scale math, never in anything displayed.
 */

import { asArray, asNumber, asObject, asString, parseRaw, RawNumber } from "./rawjson.js";

export const METRIC_KEYS = [
  "modularity",
  "scaled_nc",
  "scaled_median",
  "scaled_max",
  "scaled_energy",
] as const;

export type MetricKey = (typeof METRIC_KEYS)[number];

export interface Report {
  K: number;
  /** exact serialized decimal per metric */
  metrics: Record<MetricKey, string>;
  sizes: number[];
}

export interface SessionState {
  id: string;
  status: string;
  currentK: number;
  acceptedK: number | null;
  n: number;
  historyKeys: number[];
}

export interface Labels {
  K: number;
  labels: number[];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export interface HttpResponse {
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<HttpResponse>;

function reportFromBody(body: string): Report {
  const obj = asObject(parseRaw(body));
  const metrics = {} as Record<MetricKey, string>;
  for (const key of METRIC_KEYS) {
    metrics[key] = asNumber(obj[key]).raw;
  }
  return {
    K: asNumber(obj.K).value,
    metrics,
    sizes: asArray(obj.sizes).map((v) => asNumber(v).value),
  };
}

export class SessionApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request(path: string, method = "GET", payload?: unknown): Promise<string> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: payload === undefined ? undefined : { "Content-Type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
    const body = await response.text();
    if (response.status < 200 || response.status >= 300) {
      let detail = body;
      try {
        const parsed = asObject(parseRaw(body));
        if (typeof parsed.detail === "string") detail = parsed.detail;
      } catch {
        /* non-JSON error body: keep raw text */
      }
      throw new ApiError(response.status, detail);
    }
    return body;
  }

  async createSession(request: unknown): Promise<string> {
    const body = await this.request("/sessions", "POST", request);
    return asString(asObject(parseRaw(body)).id);
  }

  async step(sessionId: string): Promise<Report> {
    return reportFromBody(await this.request(`/sessions/${sessionId}/step`, "POST"));
  }

  async metrics(sessionId: string): Promise<Report[]> {
    const body = await this.request(`/sessions/${sessionId}/metrics`);
    return asArray(parseRaw(body)).map((item) =>
      reportFromBody(serializeBack(item)),
    );
  }

  async clusters(sessionId: string, k: number): Promise<Labels> {
    const body = await this.request(`/sessions/${sessionId}/clusters/${k}`);
    const obj = asObject(parseRaw(body));
    return {
      K: asNumber(obj.K).value,
      labels: asArray(obj.labels).map((v) => asNumber(v).value),
    };
  }

  async accept(sessionId: string, k: number): Promise<Report> {
    return reportFromBody(
      await this.request(`/sessions/${sessionId}/accept`, "POST", { K: k }),
    );
  }

  async state(sessionId: string): Promise<SessionState> {
    const obj = asObject(parseRaw(await this.request(`/sessions/${sessionId}`)));
    const accepted = obj.accepted_k;
    return {
      id: asString(obj.id),
      status: asString(obj.status),
      currentK: asNumber(obj.current_k).value,
      acceptedK: accepted === null ? null : asNumber(accepted as RawNumber).value,
      n: asNumber(obj.n).value,
      historyKeys: asArray(obj.history_keys).map((v) => asNumber(v).value),
    };
  }
}

/** Re-serialize a parsed raw value, emitting numbers verbatim. */
export function serializeBack(value: ReturnType<typeof parseRaw>): string {
  if (value === null) return "null";
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "string") return JSON.stringify(value);
  if (value instanceof RawNumber) return value.raw;
  if (Array.isArray(value)) {
    return `[${value.map(serializeBack).join(",")}]`;
  }
  const entries = Object.entries(value).map(
    ([k, v]) => `${JSON.stringify(k)}:${serializeBack(v)}`,
  );
  return `{${entries.join(",")}}`;
}
