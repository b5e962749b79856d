// Minimal SVG assembly; no drawing dependencies, just strings.

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 24, top: 44, bottom: 56 };

export interface Scale {
    (v: number): number;
    min: number;
    max: number;
    log: boolean;
}

export function makeScale(
    values: number[],
    outLo: number,
    outHi: number,
    log: boolean,
): Scale {
    let min = Infinity;
    let max = -Infinity;
    for (const v of values) {
        if (log && v <= 0) {
            continue;
        }
        if (v < min) min = v;
        if (v > max) max = v;
    }
    if (min === Infinity) {
        throw new Error("no plottable values");
    }
    if (min === max) {
        min = log ? min / 2 : min - 1;
        max = log ? max * 2 : max + 1;
    }
    const a = log ? Math.log(min) : min;
    const b = log ? Math.log(max) : max;
    const fn = ((v: number) =>
        outLo + ((log ? Math.log(v) : v) - a) / (b - a) * (outHi - outLo)) as Scale;
    fn.min = min;
    fn.max = max;
    fn.log = log;
    return fn;
}

function fmtTick(v: number): string {
    const av = Math.abs(v);
    if (av >= 10000 || (av > 0 && av < 0.01)) {
        return v.toExponential(0).replace("+", "");
    }
    return String(Math.round(v * 1000) / 1000);
}

export function decadeTicks(scale: Scale): number[] {
    const ticks: number[] = [];
    const lo = Math.ceil(Math.log10(scale.min) - 1e-9);
    const hi = Math.floor(Math.log10(scale.max) + 1e-9);
    for (let e = lo; e <= hi; e++) {
        ticks.push(Math.pow(10, e));
    }
    if (ticks.length < 2) {
        ticks.length = 0;
        ticks.push(scale.min, scale.max);
    }
    return ticks;
}

export function linearTicks(scale: Scale, count = 6): number[] {
    const span = scale.max - scale.min;
    const rawStep = span / count;
    const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= count)!;
    const ticks: number[] = [];
    for (let v = Math.ceil(scale.min / step) * step; v <= scale.max + 1e-12 * span; v += step) {
        ticks.push(v);
    }
    return ticks;
}

export function axes(
    xs: Scale,
    ys: Scale,
    xLabel: string,
    yLabel: string,
    xTicks: number[],
    yTicks: number[],
): string {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    const parts: string[] = [];
    parts.push(`<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#444"/>`);
    for (const t of xTicks) {
        const px = xs(t);
        parts.push(`<line x1="${px.toFixed(1)}" y1="${y0}" x2="${px.toFixed(1)}" y2="${y0 + 5}" stroke="#444"/>`);
        parts.push(`<text x="${px.toFixed(1)}" y="${y0 + 20}" font-size="11" text-anchor="middle">${fmtTick(t)}</text>`);
        if (px > x0 + 1 && px < x1 - 1) {
            parts.push(`<line x1="${px.toFixed(1)}" y1="${y0}" x2="${px.toFixed(1)}" y2="${y1}" stroke="#ddd" stroke-width="0.5"/>`);
        }
    }
    for (const t of yTicks) {
        const py = ys(t);
        parts.push(`<line x1="${x0 - 5}" y1="${py.toFixed(1)}" x2="${x0}" y2="${py.toFixed(1)}" stroke="#444"/>`);
        parts.push(`<text x="${x0 - 8}" y="${(py + 4).toFixed(1)}" font-size="11" text-anchor="end">${fmtTick(t)}</text>`);
        if (py < y0 - 1 && py > y1 + 1) {
            parts.push(`<line x1="${x0}" y1="${py.toFixed(1)}" x2="${x1}" y2="${py.toFixed(1)}" stroke="#ddd" stroke-width="0.5"/>`);
        }
    }
    parts.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" font-size="13" text-anchor="middle">${xLabel}</text>`);
    parts.push(`<text x="18" y="${(y0 + y1) / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 ${(y0 + y1) / 2})">${yLabel}</text>`);
    return parts.join("\n");
}

export function scatter(points: Array<[number, number]>, xs: Scale, ys: Scale, color: string, r = 2): string {
    return points
        .filter(([x, y]) => (!xs.log || x > 0) && (!ys.log || y > 0))
        .map(([x, y]) => `<circle cx="${xs(x).toFixed(1)}" cy="${ys(y).toFixed(1)}" r="${r}" fill="${color}" fill-opacity="0.45"/>`)
        .join("\n");
}

export function polyline(points: Array<[number, number]>, xs: Scale, ys: Scale, color: string, width = 2): string {
    const pts = points
        .filter(([x, y]) => (!xs.log || x > 0) && (!ys.log || y > 0))
        .map(([x, y]) => `${xs(x).toFixed(1)},${ys(y).toFixed(1)}`)
        .join(" ");
    return `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"/>`;
}

export function annotation(lines: string[]): string {
    const x = MARGIN.left + 12;
    return lines
        .map((line, i) => `<text x="${x}" y="${MARGIN.top + 18 + 16 * i}" font-size="12" font-family="monospace">${line}</text>`)
        .join("\n");
}

export function title(text: string): string {
    return `<text x="${WIDTH / 2}" y="24" font-size="15" text-anchor="middle" font-weight="bold">${text}</text>`;
}

export function svgDocument(body: string[]): string {
    return [
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
        `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
        ...body,
        "</svg>",
    ].join("\n");
}
