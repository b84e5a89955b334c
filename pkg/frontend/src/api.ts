// Typed client for the run service. The fetch function is injectable so
// tests can stub the network.

export type FieldType = "float" | "int";

export interface ParamSchema {
  name: string;
  type: FieldType;
  default: number | null;
  min: number | null;
  max: number | null;
  exclusive_min: boolean;
  exclusive_max: boolean;
  description: string;
}

export interface AlgorithmSchema {
  id: string;
  kind: "continuous" | "tour";
  params: ParamSchema[];
}

export interface ProblemEntry {
  id: string;
  name: string;
  kind: "continuous" | "tour";
  builtin: boolean;
  default_dimension?: number;
  dimension?: number;
  bounds?: [number, number];
  nodes?: number;
  cities?: [number, number][] | null;
}

export type RunStatus = "pending" | "running" | "done" | "cancelled" | "failed";

export interface RunRecordRow {
  iter: number;
  best: number;
  iter_best: number;
  mean: number;
  candidate: number[];
}

export interface RunSolution {
  value: number;
  candidate: number[];
  first_attained: number;
}

export interface PollResponse {
  run_id: string;
  status: RunStatus;
  from: number;
  total: number;
  records: RunRecordRow[];
  solution: RunSolution | null;
  error: string | null;
}

export interface RunRequest {
  algorithm: string;
  problem_id: string;
  dimension?: number;
  params: Record<string, number>;
  seed: number;
  iterations: number;
  population: number;
  stride?: number;
  target?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: Record<string, unknown>,
  ) {
    super(typeof body.error === "string" ? body.error : `HTTP ${status}`);
  }

  get field(): string | null {
    return typeof this.body.field === "string" ? this.body.field : null;
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

async function asJson(response: Response): Promise<Record<string, unknown>> {
  let body: Record<string, unknown>;
  try {
    body = (await response.json()) as Record<string, unknown>;
  } catch {
    body = { error: `HTTP ${response.status}` };
  }
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body;
}

export interface Api {
  algorithms(): Promise<AlgorithmSchema[]>;
  problems(): Promise<ProblemEntry[]>;
  uploadProblem(xml: string): Promise<string>;
  launch(request: RunRequest): Promise<string>;
  poll(runId: string, from: number): Promise<PollResponse>;
  cancel(runId: string): Promise<RunStatus>;
}

export class ApiClient implements Api {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async algorithms(): Promise<AlgorithmSchema[]> {
    const body = await asJson(await this.fetchFn(`${this.base}/api/v1/algorithms`));
    return body.algorithms as AlgorithmSchema[];
  }

  async problems(): Promise<ProblemEntry[]> {
    const body = await asJson(await this.fetchFn(`${this.base}/api/v1/problems`));
    return body.problems as ProblemEntry[];
  }

  async uploadProblem(xml: string): Promise<string> {
    const body = await asJson(await this.fetchFn(`${this.base}/api/v1/problems`, {
      method: "POST",
      headers: { "Content-Type": "application/xml" },
      body: xml,
    }));
    return body.problem_id as string;
  }

  async launch(request: RunRequest): Promise<string> {
    const body = await asJson(await this.fetchFn(`${this.base}/api/v1/runs`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    }));
    return body.run_id as string;
  }

  async poll(runId: string, from: number): Promise<PollResponse> {
    const body = await asJson(
      await this.fetchFn(`${this.base}/api/v1/runs/${runId}?from=${from}`),
    );
    return body as unknown as PollResponse;
  }

  async cancel(runId: string): Promise<RunStatus> {
    const body = await asJson(await this.fetchFn(
      `${this.base}/api/v1/runs/${runId}/cancel`,
      { method: "POST" },
    ));
    return body.status as RunStatus;
  }
}
