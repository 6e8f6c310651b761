/** Deterministic SVG rendering of log-log scaling figures. */

import { Fit } from "./ols.js";

export interface Series {
    name: string;
    xs: number[];
    ys: number[];
    ciLo?: number[];
    ciHi?: number[];
    fit?: Fit;
    fitModel?: string;
}

const WIDTH = 640;
const HEIGHT = 440;
const MARGIN = { left: 70, right: 20, top: 24, bottom: 52 };
const COLORS = ["#1f6fb2", "#c85a19", "#2e8b57", "#8a4baf", "#b2293a"];

const fmt = (v: number): string => v.toFixed(2);

function niceTicks(lo: number, hi: number): number[] {
    // powers of two between the data extremes (the sweeps double N)
    const ticks: number[] = [];
    let t = Math.pow(2, Math.ceil(Math.log2(lo) - 1e-9));
    while (t <= hi * (1 + 1e-9)) {
        ticks.push(t);
        t *= 2;
    }
    return ticks.length >= 2 ? ticks : [lo, hi];
}

function decadeTicks(lo: number, hi: number): number[] {
    const ticks: number[] = [];
    let e = Math.floor(Math.log10(lo));
    while (Math.pow(10, e) <= hi * (1 + 1e-9)) {
        const t = Math.pow(10, e);
        if (t >= lo / 10) ticks.push(t);
        e += 1;
    }
    return ticks;
}

function fmtTick(v: number): string {
    if (v >= 1 && Number.isInteger(v)) return String(v);
    const e = Math.log10(v);
    if (Number.isInteger(e)) return `1e${e}`;
    return v.toPrecision(2);
}

export function renderSvg(series: Series[], xLabel: string, yLabel: string): string {
    // log axes can only carry strictly positive coordinates
    series = series.map((s) => {
        const keep = s.xs.map((x, i) => x > 0 && s.ys[i] > 0);
        const pick = <T,>(arr: T[] | undefined) =>
            arr ? arr.filter((_, i) => keep[i]) : undefined;
        return {
            ...s,
            xs: s.xs.filter((_, i) => keep[i]),
            ys: s.ys.filter((_, i) => keep[i]),
            ciLo: pick(s.ciLo),
            ciHi: pick(s.ciHi),
        };
    });
    const allX = series.flatMap((s) => s.xs);
    const allY = series.flatMap((s) =>
        s.ys.concat(s.ciLo ?? [], s.ciHi ?? []).filter((v) => v > 0),
    );
    if (allX.length === 0 || allY.length === 0) {
        throw new Error("no positive data points to draw on log axes");
    }
    const x0 = Math.min(...allX);
    const x1 = Math.max(...allX);
    const y0 = Math.min(...allY);
    const y1 = Math.max(...allY);
    const lx0 = Math.log(x0) - 0.15;
    const lx1 = Math.log(x1) + 0.15;
    const ly0 = Math.log(y0) - 0.25;
    const ly1 = Math.log(y1) + 0.25;
    const plotW = WIDTH - MARGIN.left - MARGIN.right;
    const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
    const px = (x: number) => MARGIN.left + ((Math.log(x) - lx0) / (lx1 - lx0)) * plotW;
    const py = (y: number) => MARGIN.top + plotH - ((Math.log(y) - ly0) / (ly1 - ly0)) * plotH;

    const out: string[] = [];
    out.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    );
    out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
    out.push(
        `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#444444" stroke-width="1"/>`,
    );

    for (const t of niceTicks(x0, x1)) {
        const x = px(t);
        out.push(
            `<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${MARGIN.top + plotH + 5}" stroke="#444444"/>`,
        );
        out.push(
            `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 20}" font-family="monospace" font-size="11" text-anchor="middle">${fmtTick(t)}</text>`,
        );
    }
    for (const t of decadeTicks(y0, y1)) {
        const y = py(t);
        if (y < MARGIN.top || y > MARGIN.top + plotH) continue;
        out.push(
            `<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#444444"/>`,
        );
        out.push(
            `<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" font-family="monospace" font-size="11" text-anchor="end">${fmtTick(t)}</text>`,
        );
    }
    out.push(
        `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" font-family="monospace" font-size="13" text-anchor="middle">${xLabel}</text>`,
    );
    out.push(
        `<text x="18" y="${MARGIN.top + plotH / 2}" font-family="monospace" font-size="13" text-anchor="middle" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${yLabel}</text>`,
    );

    series.forEach((s, si) => {
        const color = COLORS[si % COLORS.length];
        if (s.ciLo && s.ciHi) {
            for (let i = 0; i < s.xs.length; i++) {
                if (!(s.ciLo[i] > 0)) continue;
                const x = px(s.xs[i]);
                out.push(
                    `<line x1="${fmt(x)}" y1="${fmt(py(s.ciLo[i]))}" x2="${fmt(x)}" y2="${fmt(py(s.ciHi[i]))}" stroke="${color}" stroke-width="1"/>`,
                );
            }
        }
        for (let i = 0; i < s.xs.length; i++) {
            out.push(
                `<circle cx="${fmt(px(s.xs[i]))}" cy="${fmt(py(s.ys[i]))}" r="3.5" fill="${color}"/>`,
            );
        }
        if (s.fit && s.fitModel && s.fitModel !== "none") {
            const f = s.fit;
            const predict = (x: number) => {
                const base =
                    s.fitModel === "power_in_N" ? Math.log(x) : Math.log(Math.log(x));
                return Math.exp(f.logPrefactor + f.exponent * base);
            };
            const steps = 64;
            const pts: string[] = [];
            for (let i = 0; i <= steps; i++) {
                const x = Math.exp(Math.log(x0) + ((Math.log(x1) - Math.log(x0)) * i) / steps);
                pts.push(`${fmt(px(x))},${fmt(py(predict(x)))}`);
            }
            out.push(
                `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="1.5" stroke-dasharray="6 3"/>`,
            );
        }
    });

    series.forEach((s, si) => {
        const color = COLORS[si % COLORS.length];
        const y = MARGIN.top + 16 + 16 * si;
        out.push(
            `<rect x="${MARGIN.left + 10}" y="${y - 9}" width="10" height="10" fill="${color}"/>`,
        );
        const label = s.fit
            ? `${s.name}: exponent ${s.fit.exponent.toFixed(4)} &#177; ${s.fit.stderr.toFixed(4)} (r&#178;=${s.fit.rSquared.toFixed(3)})`
            : s.name;
        out.push(
            `<text x="${MARGIN.left + 26}" y="${y}" font-family="monospace" font-size="12">${label}</text>`,
        );
    });

    out.push("</svg>");
    return out.join("\n") + "\n";
}
