import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { afterEach, beforeAll, describe, expect, it, vi } from "vitest";

import { main, sidecarPath } from "../src/index.js";
import { HEADER } from "./helpers.js";

const FIXTURE = path.join(
  path.dirname(fileURLToPath(import.meta.url)),
  "fixtures",
  "sweep_lie_time.csv",
);

let workdir: string;

beforeAll(() => {
  workdir = fs.mkdtempSync(path.join(os.tmpdir(), "wkbsplit-figures-cli-"));
});

afterEach(() => {
  vi.restoreAllMocks();
});

function captureStderr(): string[] {
  const chunks: string[] = [];
  vi.spyOn(process.stderr, "write").mockImplementation(((chunk: unknown) => {
    chunks.push(String(chunk));
    return true;
  }) as typeof process.stderr.write);
  return chunks;
}

function captureStdout(): string[] {
  const chunks: string[] = [];
  vi.spyOn(process.stdout, "write").mockImplementation(((chunk: unknown) => {
    chunks.push(String(chunk));
    return true;
  }) as typeof process.stdout.write);
  return chunks;
}

describe("cli main", () => {
  it("renders the fixture and reports both outputs", () => {
    const stdout = captureStdout();
    const out = path.join(workdir, "cli.svg");
    const code = main([
      "render",
      "--csv",
      FIXTURE,
      "--x",
      "h",
      "--y",
      "err_sa",
      "--out",
      out,
      "--guides",
      "1,2",
    ]);
    expect(code).toBe(0);
    expect(fs.existsSync(out)).toBe(true);
    expect(fs.existsSync(sidecarPath(out))).toBe(true);
    expect(stdout.join("")).toContain("6 curves, 42 rows");
  });

  it("rejects a missing subcommand with usage", () => {
    const stderr = captureStderr();
    expect(main([])).toBe(2);
    expect(stderr.join("")).toContain("usage:");
  });

  it("rejects unknown flags", () => {
    const stderr = captureStderr();
    expect(main(["render", "--nope", "x"])).toBe(2);
    expect(stderr.join("")).toContain("argument error");
  });

  it("rejects a y metric outside the schema", () => {
    const stderr = captureStderr();
    expect(
      main([
        "render", "--csv", FIXTURE, "--x", "h", "--y", "mass_drift_rel",
        "--out", path.join(workdir, "no.svg"),
      ]),
    ).toBe(2);
    expect(stderr.join("")).toContain("--y must be one of");
  });

  it("rejects malformed guide slopes", () => {
    const stderr = captureStderr();
    expect(
      main([
        "render", "--csv", FIXTURE, "--x", "h", "--y", "err_sa",
        "--out", path.join(workdir, "no.svg"), "--guides", "1,-2",
      ]),
    ).toBe(2);
    expect(stderr.join("")).toContain("--guides");
  });

  it("maps NoDataError to exit code 3", () => {
    const csv = path.join(workdir, "headeronly.csv");
    fs.writeFileSync(csv, HEADER + "\n");
    const stderr = captureStderr();
    expect(
      main([
        "render", "--csv", csv, "--x", "h", "--y", "err_sa",
        "--out", path.join(workdir, "no.svg"),
      ]),
    ).toBe(3);
    expect(stderr.join("")).toContain("no data:");
  });

  it("maps SchemaError to exit code 2", () => {
    const csv = path.join(workdir, "badschema.csv");
    fs.writeFileSync(csv, HEADER + ",oops\n");
    const stderr = captureStderr();
    expect(
      main([
        "render", "--csv", csv, "--x", "h", "--y", "err_sa",
        "--out", path.join(workdir, "no.svg"),
      ]),
    ).toBe(2);
    expect(stderr.join("")).toContain("schema error");
  });

  it("maps a missing input file to exit code 4", () => {
    const stderr = captureStderr();
    expect(
      main([
        "render", "--csv", path.join(workdir, "absent.csv"), "--x", "h",
        "--y", "err_sa", "--out", path.join(workdir, "no.svg"),
      ]),
    ).toBe(4);
    expect(stderr.join("")).toContain("i/o error");
  });
});
