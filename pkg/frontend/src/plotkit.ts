#!/usr/bin/env node
/**
 * plotkit: render scaling figures from sweep CSVs.
 *
 *   plotkit --input sweep.csv --x N --y infidelity \
 *           --fit power_in_logN --out figure.svg [--builder name]
 *
 * Groups rows by the builder column (or keeps one builder when filtered),
 * draws a log-log scatter with confidence whiskers, overlays the fitted
 * power law, and prints one fit-summary line per series to stdout.
 * Exits nonzero on schema mismatch or when a requested fit lacks points.
 */
import * as fs from "node:fs";
import * as process from "node:process";

import { KNOWN_X, KNOWN_Y, SchemaError, parseCsv, xValue, yValue } from "./csv.js";
import { Fit, FitError, FitModel, fitPowerLaw } from "./ols.js";
import { Series, renderSvg } from "./svg.js";

interface Options {
    input: string;
    x: string;
    y: string;
    fit: FitModel;
    out: string;
    builder?: string;
}

function parseArgs(argv: string[]): Options {
    const opts: Record<string, string> = {};
    for (let i = 0; i < argv.length; i += 2) {
        const key = argv[i];
        const value = argv[i + 1];
        if (!key.startsWith("--") || value === undefined) {
            throw new Error(`malformed arguments near '${key}'`);
        }
        opts[key.slice(2)] = value;
    }
    for (const req of ["input", "x", "y", "out"]) {
        if (!(req in opts)) throw new Error(`--${req} is required`);
    }
    if (!(KNOWN_X as readonly string[]).includes(opts.x)) {
        throw new Error(`--x must be one of ${KNOWN_X.join(", ")}`);
    }
    if (!(KNOWN_Y as readonly string[]).includes(opts.y)) {
        throw new Error(`--y must be one of ${KNOWN_Y.join(", ")}`);
    }
    const fit = (opts.fit ?? "none") as FitModel;
    if (!["power_in_N", "power_in_logN", "none"].includes(fit)) {
        throw new Error("--fit must be power_in_N, power_in_logN, or none");
    }
    return { input: opts.input, x: opts.x, y: opts.y, fit, out: opts.out, builder: opts.builder };
}

export function buildSeries(csvText: string, opts: Options): Series[] {
    const { rows } = parseCsv(csvText);
    const groups = new Map<string, typeof rows>();
    for (const row of rows) {
        if (opts.builder && row.builder !== opts.builder) continue;
        const bucket = groups.get(row.builder) ?? [];
        bucket.push(row);
        groups.set(row.builder, bucket);
    }
    if (groups.size === 0) {
        throw new SchemaError(
            opts.builder ? `no rows for builder '${opts.builder}'` : "no data rows",
        );
    }
    const series: Series[] = [];
    for (const name of [...groups.keys()].sort()) {
        const bucket = groups.get(name)!;
        const xs = bucket.map((r) => xValue(r, opts.x));
        const ys = bucket.map((r) => yValue(r, opts.y));
        const hasCi = bucket.every(
            (r) => r.values.has("ci_lo") && r.values.has("ci_hi"),
        );
        const s: Series = {
            name,
            xs,
            ys,
            ciLo: hasCi ? bucket.map((r) => r.values.get("ci_lo")!) : undefined,
            ciHi: hasCi ? bucket.map((r) => r.values.get("ci_hi")!) : undefined,
            fitModel: opts.fit,
        };
        if (opts.fit !== "none") {
            // infidelity fits share the Python toolkit's validity domain
            const filter = opts.y === "infidelity";
            s.fit = fitPowerLaw(xs, ys, opts.fit, filter);
        }
        series.push(s);
    }
    return series;
}

export function fitSummary(series: Series[], model: string): string {
    return series
        .filter((s) => s.fit)
        .map(
            (s) =>
                `${s.name} ${model} exponent=${s.fit!.exponent.toFixed(8)} ` +
                `stderr=${s.fit!.stderr.toFixed(8)} r2=${s.fit!.rSquared.toFixed(8)} ` +
                `points=${s.fit!.points}`,
        )
        .join("\n");
}

function main(): number {
    let opts: Options;
    try {
        opts = parseArgs(process.argv.slice(2));
    } catch (err) {
        process.stderr.write(`usage error: ${(err as Error).message}\n`);
        return 2;
    }
    let text: string;
    try {
        text = fs.readFileSync(opts.input, "utf-8");
    } catch (err) {
        process.stderr.write(`cannot read ${opts.input}: ${(err as Error).message}\n`);
        return 2;
    }
    try {
        const series = buildSeries(text, opts);
        const svg = renderSvg(series, opts.x, opts.y);
        fs.writeFileSync(opts.out, svg);
        const summary = fitSummary(series, opts.fit);
        if (summary) process.stdout.write(summary + "\n");
        process.stderr.write(`wrote ${opts.out}\n`);
        return 0;
    } catch (err) {
        if (err instanceof SchemaError || err instanceof FitError) {
            process.stderr.write(`error: ${err.message}\n`);
            return 1;
        }
        throw err;
    }
}

if (process.argv[1] && process.argv[1].endsWith("plotkit.js")) {
    process.exit(main());
}
