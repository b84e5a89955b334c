// Client-side field validation. Must mirror the server's rules exactly
// (same min/max and exclusivity as the schema endpoint): anything this
// module accepts the server accepts too.

import type { ParamSchema } from "./api.js";

export function validateParam(field: ParamSchema, raw: string): string | null {
  const text = raw.trim();
  if (text === "") {
    return null; // omitted: the server applies its (possibly auto) default
  }
  const value = Number(text);
  if (!Number.isFinite(value)) {
    return `${field.name} must be a number`;
  }
  if (field.type === "int" && !Number.isInteger(value)) {
    return `${field.name} must be an integer`;
  }
  if (field.min !== null) {
    if (value < field.min || (field.exclusive_min && value === field.min)) {
      const bracket = field.exclusive_min ? ">" : ">=";
      return `${field.name} must be ${bracket} ${field.min}`;
    }
  }
  if (field.max !== null) {
    if (value > field.max || (field.exclusive_max && value === field.max)) {
      const bracket = field.exclusive_max ? "<" : "<=";
      return `${field.name} must be ${bracket} ${field.max}`;
    }
  }
  return null;
}

export function parseParam(field: ParamSchema, raw: string): number | null {
  const text = raw.trim();
  if (text === "") return null; // omitted: server applies the default
  return Number(text);
}

export interface ConfigFieldSpec {
  name: string;
  integer: boolean;
  min?: number;
  max?: number;
  required: boolean;
}

export const CONFIG_FIELDS: ConfigFieldSpec[] = [
  { name: "seed", integer: true, min: 0, required: true },
  { name: "iterations", integer: true, min: 1, required: true },
  { name: "population", integer: true, min: 2, required: true },
  { name: "stride", integer: true, min: 1, required: false },
  { name: "target", integer: false, required: false },
];

export function validateConfigField(
  spec: ConfigFieldSpec,
  raw: string,
): string | null {
  const text = raw.trim();
  if (text === "") {
    return spec.required ? `${spec.name} is required` : null;
  }
  const value = Number(text);
  if (!Number.isFinite(value)) {
    return `${spec.name} must be a number`;
  }
  if (spec.integer && !Number.isInteger(value)) {
    return `${spec.name} must be an integer`;
  }
  if (spec.min !== undefined && value < spec.min) {
    return `${spec.name} must be >= ${spec.min}`;
  }
  if (spec.max !== undefined && value > spec.max) {
    return `${spec.name} must be <= ${spec.max}`;
  }
  return null;
}

export function rangeHint(field: ParamSchema): string {
  const lo = field.min === null ? "-inf" : String(field.min);
  const hi = field.max === null ? "inf" : String(field.max);
  const left = field.exclusive_min || field.min === null ? "(" : "[";
  const right = field.exclusive_max || field.max === null ? ")" : "]";
  return `${left}${lo}, ${hi}${right}`;
}
