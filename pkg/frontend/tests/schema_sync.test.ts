import { describe, expect, test } from "vitest";

import { loadJson } from "./helpers.js";

describe("shared schema file", () => {
  test("frontend copy is identical to the service copy", () => {
    const ours = loadJson<unknown>("../schema.json");
    const theirs = loadJson<unknown>(
      "../../src/copterdesign/data/schema.json",
    );
    expect(ours).toEqual(theirs);
  });

  test("declares the rules the validator depends on", () => {
    const schema = loadJson<Record<string, unknown>>("../schema.json");
    expect(schema["required"]).toEqual(
      expect.arrayContaining([
        "hover_time",
        "payload",
        "thrust_ratio",
        "rotor_count",
        "battery_density",
      ]),
    );
    const rules = schema["x-rules"] as Record<string, unknown>;
    expect(rules["exactly_one"]).toEqual([["air_density", "altitude"]]);
    expect(rules["even_above_4"]).toEqual(["rotor_count"]);
    expect(rules["supported_only"]).toEqual({ layout: ["common"] });
  });
});
