// Form state: selected algorithm, its parameter values, selected problem
// and run configuration. Switching algorithms resets that algorithm's
// inputs to schema defaults but never touches the problem selection.

import type { AlgorithmSchema, ProblemEntry, RunRequest } from "./api.js";
import {
  CONFIG_FIELDS,
  parseParam,
  validateConfigField,
  validateParam,
} from "./validation.js";

export interface FieldState {
  value: string;
  error: string | null;
}

const CONFIG_DEFAULTS: Record<string, string> = {
  seed: "42",
  iterations: "200",
  population: "20",
  stride: "",
  target: "",
};

export class FormModel {
  readonly algorithms: AlgorithmSchema[];
  problems: ProblemEntry[];
  algorithmId: string;
  problemId: string | null = null;
  dimension: string = "";
  params: Map<string, FieldState> = new Map();
  config: Map<string, FieldState> = new Map();

  constructor(algorithms: AlgorithmSchema[], problems: ProblemEntry[]) {
    if (algorithms.length === 0) throw new Error("no algorithms");
    this.algorithms = algorithms;
    this.problems = problems;
    this.algorithmId = algorithms[0].id;
    this.resetParams();
    for (const spec of CONFIG_FIELDS) {
      this.config.set(spec.name, {
        value: CONFIG_DEFAULTS[spec.name] ?? "",
        error: null,
      });
    }
  }

  get algorithm(): AlgorithmSchema {
    const found = this.algorithms.find((a) => a.id === this.algorithmId);
    if (!found) throw new Error(`unknown algorithm ${this.algorithmId}`);
    return found;
  }

  get problem(): ProblemEntry | null {
    return this.problems.find((p) => p.id === this.problemId) ?? null;
  }

  resetParams(): void {
    this.params = new Map(
      this.algorithm.params.map((p) => [
        p.name,
        { value: p.default === null ? "" : String(p.default), error: null },
      ]),
    );
  }

  selectAlgorithm(id: string): void {
    if (id === this.algorithmId) return;
    this.algorithmId = id;
    this.resetParams(); // problem selection intentionally preserved
  }

  selectProblem(id: string | null): void {
    this.problemId = id;
    this.dimension = "";
  }

  setParam(name: string, raw: string): void {
    const field = this.algorithm.params.find((p) => p.name === name);
    if (!field) throw new Error(`unknown parameter ${name}`);
    this.params.set(name, { value: raw, error: validateParam(field, raw) });
  }

  setConfig(name: string, raw: string): void {
    const spec = CONFIG_FIELDS.find((s) => s.name === name);
    if (!spec) throw new Error(`unknown config field ${name}`);
    this.config.set(name, { value: raw, error: validateConfigField(spec, raw) });
  }

  kindMismatch(): string | null {
    const problem = this.problem;
    if (problem && problem.kind !== this.algorithm.kind) {
      return `${this.algorithmId} needs a ${this.algorithm.kind} problem, ` +
        `but ${problem.id} is ${problem.kind}`;
    }
    return null;
  }

  problemError(): string | null {
    if (this.problemId === null) return "choose a problem";
    return this.kindMismatch();
  }

  errors(): string[] {
    const out: string[] = [];
    const problemError = this.problemError();
    if (problemError) out.push(problemError);
    for (const [name, state] of this.params) {
      const field = this.algorithm.params.find((p) => p.name === name);
      const error = field ? validateParam(field, state.value) : null;
      if (error) out.push(error);
    }
    for (const spec of CONFIG_FIELDS) {
      const state = this.config.get(spec.name);
      const error = validateConfigField(spec, state ? state.value : "");
      if (error) out.push(error);
    }
    return out;
  }

  canSubmit(): boolean {
    return this.errors().length === 0;
  }

  toRequest(): RunRequest {
    const errors = this.errors();
    if (errors.length > 0) {
      throw new Error(`form has errors: ${errors.join("; ")}`);
    }
    const params: Record<string, number> = {};
    for (const field of this.algorithm.params) {
      const state = this.params.get(field.name);
      const value = parseParam(field, state ? state.value : "");
      if (value !== null) params[field.name] = value;
    }
    const cfg = (name: string): string => {
      const state = this.config.get(name);
      return state ? state.value.trim() : "";
    };
    const request: RunRequest = {
      algorithm: this.algorithmId,
      problem_id: this.problemId as string,
      params,
      seed: Number(cfg("seed")),
      iterations: Number(cfg("iterations")),
      population: Number(cfg("population")),
    };
    if (cfg("stride") !== "") request.stride = Number(cfg("stride"));
    if (cfg("target") !== "") request.target = Number(cfg("target"));
    const problem = this.problem;
    if (problem && problem.builtin && problem.kind === "continuous") {
      request.dimension = this.dimension.trim() === ""
        ? problem.default_dimension
        : Number(this.dimension);
    }
    return request;
  }
}
