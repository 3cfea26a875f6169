/**
 * Minimal deterministic SVG builder: fixed canvas, fixed palette, stable
 * number formatting. No timestamps, no randomness, so identical inputs
 * produce identical bytes.
 */

export const PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#17becf", "#7f7f7f",
];

/** Short stable decimal representation for coordinates and labels. */
export function fmt(x: number): string {
    if (!Number.isFinite(x)) {
        return "0";
    }
    const rounded = Math.round(x * 100) / 100;
    return Object.is(rounded, -0) ? "0" : String(rounded);
}

/** Label formatting: up to 4 significant digits, no exponent for |x| in [1e-3, 1e5). */
export function labelFmt(x: number): string {
    if (x === 0) {
        return "0";
    }
    const abs = Math.abs(x);
    if (abs >= 1e-3 && abs < 1e5) {
        return String(Number(x.toPrecision(4)));
    }
    return x.toExponential(1);
}

export type Scale = (value: number) => number;

export function linScale(d0: number, d1: number, r0: number, r1: number): Scale {
    const span = d1 - d0 || 1;
    return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
    const l0 = Math.log10(d0);
    const span = Math.log10(d1) - l0 || 1;
    return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

/** Round ticks covering [lo, hi] at 1/2/5 steps. */
export function ticks(lo: number, hi: number, count = 5): number[] {
    if (!(hi > lo)) {
        return [lo];
    }
    const raw = (hi - lo) / count;
    const mag = 10 ** Math.floor(Math.log10(raw));
    const step = [1, 2, 5, 10].map((s) => s * mag).find((s) => s >= raw) ?? 10 * mag;
    const out: number[] = [];
    for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
        out.push(Math.abs(t) < step * 1e-9 ? 0 : t);
    }
    return out;
}

export class SvgCanvas {
    private parts: string[] = [];

    constructor(readonly width: number, readonly height: number) {}

    add(part: string): void {
        this.parts.push(part);
    }

    line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
        this.add(`<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"/>`);
    }

    polyline(points: Array<[number, number]>, stroke: string, width = 1.5, dash = ""): void {
        const attr = dash ? ` stroke-dasharray="${dash}"` : "";
        const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
        this.add(`<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="${width}"${attr}/>`);
    }

    circle(cx: number, cy: number, r: number, fill: string): void {
        this.add(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
    }

    rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none", cls = ""): void {
        const klass = cls ? ` class="${cls}"` : "";
        this.add(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}" stroke="${stroke}"${klass}/>`);
    }

    text(x: number, y: number, value: string, size = 11, anchor = "start", rotate = 0): void {
        const transform = rotate ? ` transform="rotate(${rotate} ${fmt(x)} ${fmt(y)})"` : "";
        this.add(`<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" font-family="sans-serif" text-anchor="${anchor}"${transform}>${escapeXml(value)}</text>`);
    }

    toString(metadata: string): string {
        return [
            `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
            `<metadata>${escapeXml(metadata)}</metadata>`,
            `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="white"/>`,
            ...this.parts,
            "</svg>",
            "",
        ].join("\n");
    }
}

export function escapeXml(value: string): string {
    return value.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Panel {
    x0: number;
    y0: number;
    w: number;
    h: number;
}

/** Draw x/y axes with tick marks and labels; returns nothing, mutates svg. */
export function drawAxes(
    svg: SvgCanvas, panel: Panel,
    xTicks: number[], xScale: Scale, xLabel: string,
    yTicks: number[], yScale: Scale, yLabel: string,
): void {
    const { x0, y0, w, h } = panel;
    svg.line(x0, y0 + h, x0 + w, y0 + h, "#333");
    svg.line(x0, y0, x0, y0 + h, "#333");
    for (const t of xTicks) {
        const x = xScale(t);
        svg.line(x, y0 + h, x, y0 + h + 4, "#333");
        svg.text(x, y0 + h + 16, labelFmt(t), 10, "middle");
    }
    for (const t of yTicks) {
        const y = yScale(t);
        svg.line(x0 - 4, y, x0, y, "#333");
        svg.text(x0 - 7, y + 3, labelFmt(t), 10, "end");
        svg.line(x0, y, x0 + w, y, "#eee");
    }
    svg.text(x0 + w / 2, y0 + h + 32, xLabel, 12, "middle");
    svg.text(x0 - 42, y0 + h / 2, yLabel, 12, "middle", -90);
}

export function drawLegend(svg: SvgCanvas, x: number, y: number,
                           entries: Array<[string, string]>): void {
    entries.forEach(([label, color], i) => {
        const yy = y + i * 16;
        svg.line(x, yy - 4, x + 18, yy - 4, color, 2);
        svg.text(x + 24, yy, label, 11);
    });
}
