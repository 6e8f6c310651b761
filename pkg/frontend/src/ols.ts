/**
 * Independent least-squares power-law fit in log domain.
 *
 * Deliberately re-implemented here (not calling the Python toolkit) so the
 * two codebases cross-check each other's exponents.  The conventions must
 * match exactly: only points with y in (0, 0.5) enter an infidelity fit,
 * x maps to ln(x) for power_in_N and ln(ln(x)) for power_in_logN, and the
 * slope/stderr/r^2 formulas are the plain OLS ones.
 */

export type FitModel = "power_in_N" | "power_in_logN" | "none";

export interface Fit {
    exponent: number;
    stderr: number;
    rSquared: number;
    logPrefactor: number;
    points: number;
}

export class FitError extends Error {}

export function fitPowerLaw(
    xs: number[],
    ys: number[],
    model: FitModel,
    filterDomain = true,
): Fit {
    if (model === "none") throw new FitError("no fit model selected");
    const tx: number[] = [];
    const ty: number[] = [];
    for (let i = 0; i < xs.length; i++) {
        const y = ys[i];
        if (filterDomain && !(y > 0 && y < 0.5)) continue;
        if (!filterDomain && !(y > 0)) continue;
        const base = model === "power_in_N" ? Math.log(xs[i]) : Math.log(Math.log(xs[i]));
        tx.push(base);
        ty.push(Math.log(y));
    }
    const n = tx.length;
    if (n < 4) throw new FitError(`need at least 4 fit points, got ${n}`);
    let sx = 0;
    let sy = 0;
    let sxx = 0;
    let sxy = 0;
    for (let i = 0; i < n; i++) {
        sx += tx[i];
        sy += ty[i];
        sxx += tx[i] * tx[i];
        sxy += tx[i] * ty[i];
    }
    const denom = sxx - (sx * sx) / n;
    if (denom <= 1e-12) throw new FitError("degenerate x-range");
    const slope = (sxy - (sx * sy) / n) / denom;
    const intercept = (sy - slope * sx) / n;
    let ssRes = 0;
    let ssTot = 0;
    const meanY = sy / n;
    for (let i = 0; i < n; i++) {
        const r = ty[i] - (intercept + slope * tx[i]);
        ssRes += r * r;
        ssTot += (ty[i] - meanY) * (ty[i] - meanY);
    }
    const rSquared = ssTot > 0 ? 1 - ssRes / ssTot : 1;
    const stderr = n > 2 && ssRes > 0 ? Math.sqrt(ssRes / (n - 2) / denom) : 0;
    return { exponent: slope, stderr, rSquared, logPrefactor: intercept, points: n };
}
