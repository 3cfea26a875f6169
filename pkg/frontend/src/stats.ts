export function mean(values: number[]): number {
    return values.reduce((acc, v) => acc + v, 0) / values.length;
}

/** Linear-interpolation quantile of a sorted copy of the values. */
export function quantile(values: number[], q: number): number {
    const sorted = [...values].sort((a, b) => a - b);
    const pos = (sorted.length - 1) * q;
    const lo = Math.floor(pos);
    const hi = Math.ceil(pos);
    if (lo === hi) {
        return sorted[lo];
    }
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

export interface BoxStats {
    lo: number;
    q1: number;
    median: number;
    q3: number;
    hi: number;
}

export function boxStats(values: number[]): BoxStats {
    return {
        lo: Math.min(...values),
        q1: quantile(values, 0.25),
        median: quantile(values, 0.5),
        q3: quantile(values, 0.75),
        hi: Math.max(...values),
    };
}

/** Stable group-by preserving first-seen key order. */
export function groupBy<T>(items: T[], key: (item: T) => string): Map<string, T[]> {
    const groups = new Map<string, T[]>();
    for (const item of items) {
        const k = key(item);
        const bucket = groups.get(k);
        if (bucket) {
            bucket.push(item);
        } else {
            groups.set(k, [item]);
        }
    }
    return groups;
}
