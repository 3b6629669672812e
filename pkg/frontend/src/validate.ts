/**
 * Request validation driven by the shared schema document.
 *
 * The service validates with the same bounds server-side; this module
 * exists so a bad form never leaves the browser, and its verdicts are
 * pinned to the service's by a recorded-case parity test. No rule may
 * be hardcoded here if the schema can carry it: the schema file is the
 * contract, this is just an interpreter for the subset it uses.
 */

export type FieldErrors = Record<string, string>;

interface PropertyRule {
  type?: "number" | "integer" | "string" | "array" | "object";
  minimum?: number;
  maximum?: number;
  exclusiveMinimum?: number;
  exclusiveMaximum?: number;
  enum?: unknown[];
  items?: PropertyRule;
  minItems?: number;
  maxItems?: number;
  properties?: Record<string, PropertyRule>;
  additionalProperties?: boolean;
  required?: string[];
  default?: unknown;
  description?: string;
}

export interface SchemaDoc {
  required: string[];
  additionalProperties?: boolean;
  properties: Record<string, PropertyRule>;
  "x-rules"?: {
    exactly_one?: string[][];
    even_above_4?: string[];
    supported_only?: Record<string, unknown[]>;
  };
}

function checkValue(rule: PropertyRule, value: unknown, label: string): string | null {
  if (rule.type === "number" || rule.type === "integer") {
    if (typeof value !== "number" || Number.isNaN(value)) {
      return `${label} must be a number`;
    }
    if (rule.type === "integer" && !Number.isInteger(value)) {
      return `${label} must be an integer`;
    }
    if (rule.exclusiveMinimum !== undefined && value <= rule.exclusiveMinimum) {
      return `${label} must be greater than ${rule.exclusiveMinimum}`;
    }
    if (rule.minimum !== undefined && value < rule.minimum) {
      return `${label} must be at least ${rule.minimum}`;
    }
    if (rule.exclusiveMaximum !== undefined && value >= rule.exclusiveMaximum) {
      return `${label} must be less than ${rule.exclusiveMaximum}`;
    }
    if (rule.maximum !== undefined && value > rule.maximum) {
      return `${label} must be at most ${rule.maximum}`;
    }
    return null;
  }

  if (rule.type === "string") {
    if (typeof value !== "string") {
      return `${label} must be a string`;
    }
    if (rule.enum && !rule.enum.includes(value)) {
      return `${label} must be one of: ${rule.enum.join(", ")}`;
    }
    return null;
  }

  if (rule.type === "array") {
    if (!Array.isArray(value)) {
      return `${label} must be an array`;
    }
    if (rule.minItems !== undefined && value.length < rule.minItems) {
      return `${label} needs at least ${rule.minItems} entries`;
    }
    if (rule.maxItems !== undefined && value.length > rule.maxItems) {
      return `${label} allows at most ${rule.maxItems} entries`;
    }
    if (rule.items) {
      for (let i = 0; i < value.length; i++) {
        const err = checkValue(rule.items, value[i], `${label}[${i}]`);
        if (err) {
          return err;
        }
      }
    }
    return null;
  }

  if (rule.type === "object") {
    if (typeof value !== "object" || value === null || Array.isArray(value)) {
      return `${label} must be an object`;
    }
    const record = value as Record<string, unknown>;
    const props = rule.properties ?? {};
    if (rule.additionalProperties === false) {
      for (const key of Object.keys(record)) {
        if (!(key in props)) {
          return `${label}.${key} is not a recognized field`;
        }
      }
    }
    for (const [key, sub] of Object.entries(props)) {
      if (record[key] !== undefined) {
        const err = checkValue(sub, record[key], `${label}.${key}`);
        if (err) {
          return err;
        }
      }
    }
    return null;
  }

  return null;
}

/** Validate a request body; an empty result means it may be sent. */
export function validateRequest(
  schema: SchemaDoc,
  body: Record<string, unknown>,
): FieldErrors {
  const errors: FieldErrors = {};
  const props = schema.properties;

  if (schema.additionalProperties === false) {
    for (const key of Object.keys(body)) {
      if (!(key in props)) {
        errors[key] = `${key} is not a recognized field`;
      }
    }
  }

  for (const field of schema.required) {
    if (body[field] === undefined) {
      errors[field] = `${field} is required`;
    }
  }

  for (const [field, rule] of Object.entries(props)) {
    if (body[field] === undefined || errors[field]) {
      continue;
    }
    const err = checkValue(rule, body[field], field);
    if (err) {
      errors[field] = err;
    }
  }

  const rules = schema["x-rules"] ?? {};

  for (const group of rules.exactly_one ?? []) {
    const present = group.filter((f) => body[f] !== undefined);
    if (present.length !== 1) {
      const verb = present.length === 0 ? "one is required" : "not both";
      for (const field of group) {
        errors[field] ??= `give exactly one of ${group.join(" or ")}: ${verb}`;
      }
    }
  }

  for (const field of rules.even_above_4 ?? []) {
    const value = body[field];
    if (
      typeof value === "number" &&
      Number.isInteger(value) &&
      value > 4 &&
      value % 2 !== 0 &&
      !errors[field]
    ) {
      errors[field] = `${field} above 4 must be even`;
    }
  }

  for (const [field, allowed] of Object.entries(rules.supported_only ?? {})) {
    const value = body[field];
    if (value !== undefined && !allowed.includes(value) && !errors[field]) {
      errors[field] = `${field} supports only: ${allowed.join(", ")}`;
    }
  }

  return errors;
}

export function isValid(errors: FieldErrors): boolean {
  return Object.keys(errors).length === 0;
}
