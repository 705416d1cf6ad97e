/** In-memory stand-in for the session service, wired into global fetch. */

import { vi } from "vitest";

interface FakeSession {
  id: string;
  name: string;
  n_max: number;
  has_satisfaction: boolean;
  dim_names: string[];
  dim_units: string[];
  lower: number[];
  upper: number[];
  iteration: number;
  history: Array<Record<string, unknown>>;
}

export class FakeService {
  sessions = new Map<string, FakeSession>();
  private nextId = 1;

  private candidate(s: FakeSession): number[] {
    // deterministic point strictly inside the box, distinct per iteration
    return s.lower.map(
      (lo, k) =>
        lo + ((s.upper[k] - lo) * ((s.iteration % 7) + 1)) / 9 + k * 1e-6,
    );
  }

  private queryView(s: FakeSession): Record<string, unknown> {
    if (s.iteration >= s.n_max) {
      return {
        status: "finished",
        best_point: s.lower.map((lo, k) => (lo + s.upper[k]) / 2),
        n_samples: s.n_max,
      };
    }
    return {
      status: "pending",
      iteration: s.iteration,
      n_max: s.n_max,
      candidate: this.candidate(s),
      incumbent:
        s.iteration === 0 ? null : s.lower.map((lo, k) => lo + k * 0.25),
      requires_preference: s.iteration > 0,
      requires_satisfaction: s.has_satisfaction,
      dim_names: s.dim_names,
      dim_units: s.dim_units,
    };
  }

  private summary(s: FakeSession): Record<string, unknown> {
    return {
      id: s.id,
      name: s.name,
      phase: s.iteration >= s.n_max ? "finished" : "active-learning",
      n_samples: s.iteration,
      n_max: s.n_max,
      created: 0,
      updated: 0,
    };
  }

  private stateView(s: FakeSession): Record<string, unknown> {
    const out: Record<string, unknown> = {
      session: this.summary(s),
      incumbent: s.iteration === 0 ? null : s.lower,
      history: s.history,
      epsilon: 1.0,
      query: this.queryView(s),
      dim_names: s.dim_names,
      dim_units: s.dim_units,
    };
    if (s.dim_names.length === 2 && s.iteration >= 1) {
      out.g_grid = Array.from({ length: 50 }, (_, r) =>
        Array.from({ length: 50 }, (_, c) => ((r + c) % 51) / 50),
      );
    }
    return out;
  }

  handle(url: string, init?: RequestInit): Response {
    const method = init?.method ?? "GET";
    const json = (status: number, body: unknown) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "Content-Type": "application/json" },
      });

    if (url === "/sessions" && method === "GET") {
      return json(
        200,
        [...this.sessions.values()].map((s) => this.summary(s)),
      );
    }
    if (url === "/sessions" && method === "POST") {
      const body = JSON.parse(String(init?.body));
      if (
        body.lower.some((lo: number, k: number) => lo >= body.upper[k])
      ) {
        return json(400, { detail: "lower bound must be below upper bound" });
      }
      const session: FakeSession = {
        id: `fake${this.nextId++}`,
        name: body.name ?? "",
        n_max: body.n_max,
        has_satisfaction: Boolean(body.has_satisfaction),
        dim_names: body.dim_names,
        dim_units: body.dim_units ?? body.dim_names.map(() => ""),
        lower: body.lower,
        upper: body.upper,
        iteration: 0,
        history: [],
      };
      this.sessions.set(session.id, session);
      return json(201, {
        session: this.summary(session),
        query: this.queryView(session),
      });
    }

    const match = url.match(/^\/sessions\/([^/]+)\/(query|state|response)$/);
    if (match) {
      const session = this.sessions.get(match[1]);
      if (!session) return json(404, { detail: "unknown session" });
      if (match[2] === "query") return json(200, this.queryView(session));
      if (match[2] === "state") return json(200, this.stateView(session));
      const body = JSON.parse(String(init?.body));
      if (session.iteration >= session.n_max) {
        return json(409, { detail: "session finished" });
      }
      if (body.iteration !== session.iteration) {
        return json(409, { detail: "stale iteration" });
      }
      session.history.push({
        iteration: session.iteration,
        point: this.candidate(session),
        preference: body.preference,
        feasible: body.feasible,
        satisfactory: body.satisfactory ?? null,
        incumbent_index: 0,
      });
      session.iteration += 1;
      return json(200, {
        session: this.summary(session),
        query: this.queryView(session),
      });
    }
    return json(404, { detail: `no route ${method} ${url}` });
  }

  install(): void {
    vi.stubGlobal(
      "fetch",
      vi.fn(async (url: string, init?: RequestInit) =>
        this.handle(String(url), init),
      ),
    );
  }
}
