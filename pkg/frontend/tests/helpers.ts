import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

/** Raw bytes of a recorded service response, exactly as captured. */
export function fixtureText(name: string): string {
  return readFileSync(join(here, "fixtures", name), "utf8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}
