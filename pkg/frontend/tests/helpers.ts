import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

const here = path.dirname(fileURLToPath(import.meta.url));

/** Parse a JSON file addressed relative to the tests/ directory. */
export function loadJson<T>(relative: string): T {
  return JSON.parse(readFileSync(path.join(here, relative), "utf-8")) as T;
}
