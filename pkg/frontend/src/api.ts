/** Typed client for the session service HTTP+JSON API. */

export interface SessionSummary {
  id: string;
  name: string;
  phase: string;
  n_samples: number;
  n_max: number;
  created: number;
  updated: number;
}

export interface PendingQuery {
  status: "pending";
  iteration: number;
  n_max: number;
  candidate: number[];
  incumbent: number[] | null;
  requires_preference: boolean;
  requires_satisfaction: boolean;
  dim_names: string[];
  dim_units: string[];
}

export interface FinishedQuery {
  status: "finished";
  best_point: number[] | null;
  n_samples: number;
}

export type QueryView = PendingQuery | FinishedQuery;

export interface HistoryRow {
  iteration: number;
  point: number[];
  preference: number | null;
  feasible: number;
  satisfactory: number | null;
  incumbent_index: number;
}

export interface SessionState {
  session: SessionSummary;
  incumbent: number[] | null;
  history: HistoryRow[];
  epsilon: number;
  query: QueryView;
  dim_names: string[];
  dim_units: string[];
  g_grid?: number[][];
  s_grid?: number[][];
}

export interface CreateSessionRequest {
  name: string;
  lower: number[];
  upper: number[];
  dim_names?: string[];
  dim_units?: string[];
  n_max: number;
  n_init?: number;
  has_satisfaction?: boolean;
  seed?: number;
}

/** -1 = prefer the candidate, +1 = prefer the incumbent, 0 = tie. */
export type Preference = -1 | 0 | 1;

export interface QueryResponseBody {
  iteration: number;
  preference: Preference | null;
  feasible: 0 | 1;
  satisfactory?: 0 | 1 | null;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (typeof body.detail === "string") detail = body.detail;
      else if (body.detail) detail = JSON.stringify(body.detail);
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export function listSessions(): Promise<SessionSummary[]> {
  return request("/sessions");
}

export function createSession(
  body: CreateSessionRequest,
): Promise<{ session: SessionSummary; query: QueryView }> {
  return request("/sessions", { method: "POST", body: JSON.stringify(body) });
}

export function getQuery(sessionId: string): Promise<QueryView> {
  return request(`/sessions/${sessionId}/query`);
}

export function getState(sessionId: string): Promise<SessionState> {
  return request(`/sessions/${sessionId}/state`);
}

export function postResponse(
  sessionId: string,
  body: QueryResponseBody,
): Promise<{ session: SessionSummary; query: QueryView }> {
  return request(`/sessions/${sessionId}/response`, {
    method: "POST",
    body: JSON.stringify(body),
  });
}
