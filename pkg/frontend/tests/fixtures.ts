import type { AlgorithmSchema, ProblemEntry } from "../src/api.js";

export const PSO: AlgorithmSchema = {
  id: "pso",
  kind: "continuous",
  params: [
    { name: "w", type: "float", default: 0.7298, min: 0, max: 1.2,
      exclusive_min: false, exclusive_max: false, description: "inertia" },
    { name: "c1", type: "float", default: 1.49618, min: 0, max: null,
      exclusive_min: false, exclusive_max: false, description: "cognitive" },
    { name: "c2", type: "float", default: 1.49618, min: 0, max: null,
      exclusive_min: false, exclusive_max: false, description: "social" },
    { name: "vfrac", type: "float", default: 0.5, min: 0, max: 1,
      exclusive_min: true, exclusive_max: false, description: "clamp" },
  ],
};

export const FA: AlgorithmSchema = {
  id: "fa",
  kind: "continuous",
  params: [
    { name: "beta0", type: "float", default: 1.0, min: 0, max: null,
      exclusive_min: true, exclusive_max: false, description: "pull" },
    { name: "gamma", type: "float", default: null, min: 0, max: null,
      exclusive_min: true, exclusive_max: false, description: "absorption" },
  ],
};

export const ACO: AlgorithmSchema = {
  id: "aco",
  kind: "tour",
  params: [
    { name: "rho", type: "float", default: 0.5, min: 0, max: 1,
      exclusive_min: true, exclusive_max: true, description: "evaporation" },
  ],
};

export const SPHERE: ProblemEntry = {
  id: "sphere",
  name: "sphere",
  kind: "continuous",
  builtin: true,
  default_dimension: 10,
  bounds: [-5.12, 5.12],
};

export const SQUARE4: ProblemEntry = {
  id: "tsp-square4",
  name: "tsp-square4",
  kind: "tour",
  builtin: true,
  nodes: 4,
  cities: [[0, 0], [1, 0], [1, 1], [0, 1]],
};

export const MATRIX_ONLY: ProblemEntry = {
  id: "p-matrix",
  name: "matrix only",
  kind: "tour",
  builtin: false,
  nodes: 3,
  cities: null,
};

export const ALGOS = [PSO, FA, ACO];
export const PROBLEMS = [SPHERE, SQUARE4, MATRIX_ONLY];
