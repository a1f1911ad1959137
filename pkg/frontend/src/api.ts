// Typed client for the /v1 session API, including async result polling.

export interface Bounds {
  z_min: number[];
  z_max: number[];
  lambdas: number[];
}

export interface SessionInfo {
  id: string;
  criteria: string[];
  bounds: Bounds;
  kind?: string;
}

export interface DecisionPayload {
  kind?: string;
  policy?: number[][][];
  mask?: string[];
  managed?: number[][];
  assignment?: Record<string, number>;
}

export interface SolveRecord {
  token: string;
  reference: number[];
  status: string;
  criteria: number[];
  achievement: number | null;
  decision: DecisionPayload;
  timestamp: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseOrThrow(res: Response): Promise<unknown> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok && res.status !== 202) {
    const detail =
      typeof body === "object" && body !== null && "detail" in body
        ? String((body as { detail: unknown }).detail)
        : res.statusText;
    throw new ApiError(res.status, detail);
  }
  return body;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly pollIntervalMs = 250,
    private readonly pollTimeoutMs = 120_000,
  ) {}

  private async post(path: string, payload: unknown): Promise<{ status: number; body: unknown }> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    return { status: res.status, body: await parseOrThrow(res) };
  }

  private async get(path: string): Promise<{ status: number; body: unknown }> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`);
    return { status: res.status, body: await parseOrThrow(res) };
  }

  async createSession(modelDocument: unknown): Promise<SessionInfo> {
    const { body } = await this.post("/v1/sessions", modelDocument);
    return body as SessionInfo;
  }

  async createDemo(kind: "mdp" | "grid", params: Record<string, unknown>): Promise<SessionInfo> {
    const { body } = await this.post(`/v1/demos/${kind}`, params);
    return { ...(body as SessionInfo), kind };
  }

  async history(sessionId: string): Promise<SolveRecord[]> {
    const { body } = await this.get(`/v1/sessions/${sessionId}/history`);
    return body as SolveRecord[];
  }

  /**
   * Submit a reference point. A 200 carries the finished record; a 202
   * carries a token that is polled until the solve lands. `onPending`
   * fires once per poll so the UI can show progress.
   */
  async submitReference(
    sessionId: string,
    values: number[],
    onPending?: (token: string) => void,
  ): Promise<SolveRecord> {
    const { status, body } = await this.post(`/v1/sessions/${sessionId}/reference`, { values });
    if (status !== 202) {
      return body as SolveRecord;
    }
    const token = (body as { token: string }).token;
    const deadline = Date.now() + this.pollTimeoutMs;
    while (Date.now() < deadline) {
      if (onPending) onPending(token);
      await new Promise((resolve) => setTimeout(resolve, this.pollIntervalMs));
      const poll = await this.get(`/v1/sessions/${sessionId}/results/${token}`);
      if (poll.status === 200) {
        return poll.body as SolveRecord;
      }
    }
    throw new ApiError(408, `solve ${token} still pending after ${this.pollTimeoutMs} ms`);
  }
}
