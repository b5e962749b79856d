import { ScanRow } from "./csv";

export interface LinearFit {
    slope: number;
    intercept: number;
}

// Mean-centered least squares; same arithmetic the primary library uses,
// so re-fits agree to rounding.
export function linearFit(pairs: Array<[number, number]>): LinearFit {
    const n = pairs.length;
    if (n < 2) {
        throw new Error("need at least two points");
    }
    let mx = 0;
    let my = 0;
    for (const [x, y] of pairs) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    let num = 0;
    let den = 0;
    for (const [x, y] of pairs) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    return { slope: num / den, intercept: my - (num / den) * mx };
}

export function logLogSlope(pairs: Array<[number, number]>): number {
    const pts: Array<[number, number]> = [];
    for (const [x, y] of pairs) {
        if (y !== 0) {
            pts.push([Math.log(x), Math.log(Math.abs(y))]);
        }
    }
    return linearFit(pts).slope;
}

// (geometric block center 2^(k+1/2), median |residual|) per dyadic block of |D|
export function dyadicMedians(rows: ScanRow[]): Array<[number, number]> {
    const blocks = new Map<number, number[]>();
    for (const r of rows) {
        const k = Math.floor(Math.log2(Math.abs(r.D)));
        let vals = blocks.get(k);
        if (!vals) {
            vals = [];
            blocks.set(k, vals);
        }
        vals.push(Math.abs(r.residualOrRemainder));
    }
    const out: Array<[number, number]> = [];
    for (const k of [...blocks.keys()].sort((a, b) => a - b)) {
        const vals = blocks.get(k)!.sort((a, b) => a - b);
        const m = Math.floor(vals.length / 2);
        const med = vals.length % 2 ? vals[m] : 0.5 * (vals[m - 1] + vals[m]);
        out.push([Math.pow(2, k + 0.5), med]);
    }
    return out;
}

// Envelope constant for |twisted| ~ c N^(-1/2) (log N)^3: least squares in
// log space, i.e. exp of the mean log-ratio.
export function envelopeConstant(pairs: Array<[number, number]>): number {
    let acc = 0;
    let n = 0;
    for (const [N, value] of pairs) {
        if (value !== 0) {
            acc += Math.log(Math.abs(value)) - (-0.5 * Math.log(N) + 3 * Math.log(Math.log(N)));
            n++;
        }
    }
    if (n === 0) {
        throw new Error("no nonzero values to fit");
    }
    return Math.exp(acc / n);
}
