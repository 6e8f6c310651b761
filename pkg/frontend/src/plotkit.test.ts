import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { SchemaError, parseCsv } from "./csv.js";
import { buildSeries, fitSummary } from "./plotkit.js";
import { renderSvg } from "./svg.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const golden = path.join(here, "..", "golden");
const fixtureCsv = path.join(golden, "scaling_fixture.csv");
const cliPath = path.join(here, "..", "dist", "plotkit.js");

const readFixture = () => fs.readFileSync(fixtureCsv, "utf-8");

describe("csv parsing", () => {
    it("reads the sweep schema", () => {
        const { header, rows } = parseCsv(readFixture());
        expect(header).toEqual([
            "builder", "N", "p", "trials", "seed", "infidelity", "ci_lo", "ci_hi",
        ]);
        expect(rows.length).toBe(14);
    });

    it("rejects an empty file", () => {
        expect(() => parseCsv("")).toThrow(SchemaError);
    });

    it("rejects a ragged row", () => {
        expect(() => parseCsv("builder,N\nunary,8,9")).toThrow(SchemaError);
    });
});

describe("cross-implementation fit check", () => {
    const pythonFits = JSON.parse(
        fs.readFileSync(path.join(golden, "python_fits.json"), "utf-8"),
    ) as Record<string, { exponent: number; stderr: number; r_squared: number }>;

    for (const model of ["power_in_N", "power_in_logN"] as const) {
        for (const builder of ["bucket_brigade", "unary"]) {
            it(`matches the Python fit for ${builder} under ${model}`, () => {
                const series = buildSeries(readFixture(), {
                    input: fixtureCsv, x: "N", y: "infidelity",
                    fit: model, out: "", builder,
                });
                expect(series).toHaveLength(1);
                const fit = series[0].fit!;
                const ref = pythonFits[`${builder}:${model}`];
                expect(Math.abs(fit.exponent - ref.exponent)).toBeLessThan(1e-6);
                expect(Math.abs(fit.stderr - ref.stderr)).toBeLessThan(1e-6);
                expect(Math.abs(fit.rSquared - ref.r_squared)).toBeLessThan(1e-6);
            });
        }
    }
});

describe("figure rendering", () => {
    it("regenerates the golden figures byte-for-byte", () => {
        for (const [fit, name] of [
            ["power_in_N", "scaling_power_in_N.svg"],
            ["power_in_logN", "scaling_power_in_logN.svg"],
        ] as const) {
            const series = buildSeries(readFixture(), {
                input: fixtureCsv, x: "N", y: "infidelity", fit, out: "",
            });
            const svg = renderSvg(series, "N", "infidelity");
            const want = fs.readFileSync(path.join(golden, name), "utf-8");
            expect(svg).toBe(want);
        }
    });

    it("single-builder figure is byte-stable", () => {
        const series = buildSeries(readFixture(), {
            input: fixtureCsv, x: "N", y: "infidelity",
            fit: "power_in_logN", out: "", builder: "bucket_brigade",
        });
        const svg = renderSvg(series, "N", "infidelity");
        const want = fs.readFileSync(path.join(golden, "bb_only.svg"), "utf-8");
        expect(svg).toBe(want);
    });

    it("annotates every series with its exponent", () => {
        const series = buildSeries(readFixture(), {
            input: fixtureCsv, x: "N", y: "infidelity", fit: "power_in_N", out: "",
        });
        const svg = renderSvg(series, "N", "infidelity");
        expect(svg).toContain("bucket_brigade: exponent");
        expect(svg).toContain("unary: exponent");
        const summary = fitSummary(series, "power_in_N");
        expect(summary.split("\n")).toHaveLength(2);
    });
});

describe("resource sweeps", () => {
    const resourceCsv = [
        "builder,N,ell,t_count,depth,gates",
        "select_swap,64,0,580,203,319",
        "select_swap,64,1,248,238,241",
        "select_swap,64,2,136,136,157",
        "select_swap,64,3,104,90,133",
        "recursive,8,,24,22,22",
        "recursive,16,,56,49,49",
    ].join("\n");

    it("tolerates absent optional columns", () => {
        const { rows } = parseCsv(resourceCsv);
        expect(rows[4].values.has("ell")).toBe(false);
        expect(rows[0].values.get("ell")).toBe(0);
    });

    it("drops nonpositive points from log axes", () => {
        const series = buildSeries(resourceCsv, {
            input: "", x: "ell", y: "t_count", fit: "none", out: "",
            builder: "select_swap",
        });
        const svg = renderSvg(series, "ell", "t_count");
        // the ell=0 point cannot sit on a log axis; three points remain
        expect((svg.match(/<circle/g) ?? []).length).toBe(3);
    });
});

describe("command line", () => {
    const run = (args: string[]) => {
        try {
            const stdout = execFileSync("node", [cliPath, ...args], {
                encoding: "utf-8",
            });
            return { code: 0, stdout };
        } catch (err: any) {
            return { code: err.status as number, stdout: String(err.stdout ?? "") };
        }
    };

    it("renders and reports fits", () => {
        const out = path.join(os.tmpdir(), `plotkit-test-${process.pid}.svg`);
        const res = run([
            "--input", fixtureCsv, "--x", "N", "--y", "infidelity",
            "--fit", "power_in_logN", "--out", out,
        ]);
        expect(res.code).toBe(0);
        expect(res.stdout).toContain("bucket_brigade power_in_logN exponent=");
        expect(fs.existsSync(out)).toBe(true);
        fs.unlinkSync(out);
    });

    it("empty csv exits nonzero and writes nothing", () => {
        const empty = path.join(os.tmpdir(), `plotkit-empty-${process.pid}.csv`);
        const out = path.join(os.tmpdir(), `plotkit-none-${process.pid}.svg`);
        fs.writeFileSync(empty, "");
        const res = run([
            "--input", empty, "--x", "N", "--y", "infidelity",
            "--fit", "none", "--out", out,
        ]);
        expect(res.code).not.toBe(0);
        expect(fs.existsSync(out)).toBe(false);
        fs.unlinkSync(empty);
    });

    it("missing column exits nonzero", () => {
        const bad = path.join(os.tmpdir(), `plotkit-bad-${process.pid}.csv`);
        fs.writeFileSync(bad, "builder,N\nunary,8\nunary,16\n");
        const out = path.join(os.tmpdir(), `plotkit-none2-${process.pid}.svg`);
        const res = run([
            "--input", bad, "--x", "N", "--y", "infidelity",
            "--fit", "none", "--out", out,
        ]);
        expect(res.code).not.toBe(0);
        fs.unlinkSync(bad);
    });

    it("bad usage exits 2", () => {
        const res = run(["--input", fixtureCsv]);
        expect(res.code).toBe(2);
    });
});
