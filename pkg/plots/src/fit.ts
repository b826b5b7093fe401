/** Ordinary least squares on (x, y) pairs, plus the log-log wrapper. */

export interface Fit {
  slope: number;
  intercept: number;
  rSquared: number;
}

export function leastSquares(xs: number[], ys: number[]): Fit {
  const n = xs.length;
  if (n < 2 || ys.length !== n) {
    throw new Error(`need >= 2 paired points, got ${n}/${ys.length}`);
  }
  const xbar = xs.reduce((a, b) => a + b, 0) / n;
  const ybar = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  const slope = sxy / sxx;
  const intercept = ybar - slope * xbar;
  let ssRes = 0;
  let ssTot = 0;
  for (let i = 0; i < n; i++) {
    const pred = slope * xs[i] + intercept;
    ssRes += (ys[i] - pred) * (ys[i] - pred);
    ssTot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  return { slope, intercept, rSquared: ssTot > 0 ? 1 - ssRes / ssTot : 1 };
}

export function logLogFit(xs: number[], ys: number[]): Fit {
  const pairs = xs
    .map((x, i) => [x, ys[i]] as const)
    .filter(([x, y]) => x > 0 && y > 0);
  return leastSquares(
    pairs.map(([x]) => Math.log(x)),
    pairs.map(([, y]) => Math.log(y)),
  );
}
