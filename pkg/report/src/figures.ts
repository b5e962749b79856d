import { ScanRow } from "./csv";
import { dyadicMedians, envelopeConstant, logLogSlope } from "./fit";
import {
    HEIGHT,
    MARGIN,
    WIDTH,
    annotation,
    axes,
    decadeTicks,
    linearTicks,
    makeScale,
    polyline,
    scatter,
    svgDocument,
    title,
} from "./svg";

export type FigureKind =
    | "remainder_decay"
    | "twisted_scaling"
    | "weyl_decay"
    | "LD_histogram";

export const FIGURE_KINDS: FigureKind[] = [
    "remainder_decay",
    "twisted_scaling",
    "weyl_decay",
    "LD_histogram",
];

export interface FigureSpec {
    inputCsv: string;
    figureKind: FigureKind;
    output: string;
}

export interface FigureResult {
    svg: string;
    // stdout lines, e.g. "slope: -0.83"; numbers via Number toString so they
    // round-trip losslessly
    lines: string[];
}

const PLOT_X: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
const PLOT_Y: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];

function decayFigure(rows: ScanRow[], heading: string, yLabel: string): FigureResult {
    const points: Array<[number, number]> = rows.map(
        (r) => [Math.abs(r.D), Math.abs(r.residualOrRemainder)],
    );
    const medians = dyadicMedians(rows);
    const slope = logLogSlope(medians);
    const xs = makeScale(points.map((p) => p[0]), PLOT_X[0], PLOT_X[1], true);
    const ys = makeScale(points.map((p) => p[1]).filter((v) => v > 0), PLOT_Y[0], PLOT_Y[1], true);
    const body = [
        title(heading),
        axes(xs, ys, "|D|", yLabel, decadeTicks(xs), decadeTicks(ys)),
        scatter(points, xs, ys, "#4477aa"),
        polyline(medians, xs, ys, "#cc3311"),
        annotation([
            `dyadic-median slope = ${slope.toFixed(4)}`,
            `${rows.length} discriminants, ${medians.length} blocks`,
        ]),
    ];
    return { svg: svgDocument(body), lines: [`slope: ${slope}`] };
}

export function remainderDecay(rows: ScanRow[]): FigureResult {
    return decayFigure(rows, "Moment remainder vs |D|", "|remainder|");
}

export function weylDecay(rows: ScanRow[]): FigureResult {
    return decayFigure(rows, "Eisenstein class average vs |D|", "|class average|");
}

export function twistedScaling(rows: ScanRow[]): FigureResult {
    const points: Array<[number, number]> = rows.map((r) => [r.N, Math.abs(r.lhs)]);
    const slope = logLogSlope(points);
    const c = envelopeConstant(points);
    const nLo = Math.min(...points.map((p) => p[0]));
    const nHi = Math.max(...points.map((p) => p[0]));
    const curve: Array<[number, number]> = [];
    for (let i = 0; i <= 100; i++) {
        const N = nLo * Math.pow(nHi / nLo, i / 100);
        curve.push([N, c * Math.pow(N, -0.5) * Math.pow(Math.log(N), 3)]);
    }
    const yVals = points.map((p) => p[1]).filter((v) => v > 0).concat(curve.map((p) => p[1]));
    const xs = makeScale(points.map((p) => p[0]), PLOT_X[0], PLOT_X[1], true);
    const ys = makeScale(yVals, PLOT_Y[0], PLOT_Y[1], true);
    const body = [
        title("Twisted moment vs prime level"),
        axes(xs, ys, "N", "|twisted moment|", decadeTicks(xs), decadeTicks(ys)),
        scatter(points, xs, ys, "#4477aa", 3),
        polyline(curve, xs, ys, "#228833"),
        annotation([
            `slope = ${slope.toFixed(4)}`,
            `envelope c N^(-1/2) (log N)^3, c = ${c.toFixed(4)}`,
        ]),
    ];
    return {
        svg: svgDocument(body),
        lines: [`slope: ${slope}`, `envelope_c: ${c}`],
    };
}

export function ldHistogram(rows: ScanRow[]): FigureResult {
    const ratios = rows.map((r) => r.residualOrRemainder);
    const minRatio = Math.min(...ratios);
    const lo = minRatio;
    const hi = Math.max(...ratios);
    const nBins = 40;
    const width = (hi - lo) / nBins || 1;
    const counts = new Array<number>(nBins).fill(0);
    for (const v of ratios) {
        let b = Math.floor((v - lo) / width);
        if (b >= nBins) b = nBins - 1;
        counts[b]++;
    }
    const xs = makeScale([lo, hi], PLOT_X[0], PLOT_X[1], false);
    const ys = makeScale([0, Math.max(...counts)], PLOT_Y[0], PLOT_Y[1], false);
    const bars: string[] = [];
    for (let b = 0; b < nBins; b++) {
        if (counts[b] === 0) continue;
        const x0 = xs(lo + b * width);
        const x1 = xs(lo + (b + 1) * width);
        const yTop = ys(counts[b]);
        bars.push(
            `<rect x="${x0.toFixed(1)}" y="${yTop.toFixed(1)}" width="${(x1 - x0).toFixed(1)}" height="${(PLOT_Y[0] - yTop).toFixed(1)}" fill="#4477aa" stroke="white" stroke-width="0.5"/>`,
        );
    }
    const body = [
        title("Distribution of L_D / log|D|"),
        axes(xs, ys, "L_D / log|D|", "count", linearTicks(xs), linearTicks(ys)),
        ...bars,
        annotation([
            `min ratio = ${minRatio.toFixed(6)}`,
            `${rows.length} fundamental discriminants`,
        ]),
    ];
    return { svg: svgDocument(body), lines: [`min_ratio: ${minRatio}`] };
}

export function renderFigure(kind: FigureKind, rows: ScanRow[]): FigureResult {
    if (rows.length === 0) {
        throw new Error("input CSV has no data rows");
    }
    switch (kind) {
        case "remainder_decay":
            return remainderDecay(rows);
        case "twisted_scaling":
            return twistedScaling(rows);
        case "weyl_decay":
            return weylDecay(rows);
        case "LD_histogram":
            return ldHistogram(rows);
    }
}
