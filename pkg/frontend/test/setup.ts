// Generates the solver artifacts the figure tests consume, once per checkout.
// The frontend talks to the solver only through its CSV files, so the setup
// shells out to the CLI exactly like a user would.

import { execFileSync } from "node:child_process";
import { existsSync } from "node:fs";
import { join } from "node:path";

export const ARTIFACT_DIR = join(__dirname, "artifacts");

const REQUIRED = ["nodes.csv", "u.csv", "solution.csv", "line.csv", "report.json"];

export default function setup(): void {
  if (REQUIRED.every((name) => existsSync(join(ARTIFACT_DIR, name)))) return;
  execFileSync(
    "python3",
    ["-m", "imexrbf.cli", "run", "--out", ARTIFACT_DIR, "--seed", "1"],
    { stdio: "inherit", timeout: 300_000 },
  );
}
