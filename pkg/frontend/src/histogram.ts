import type { BinCounts, BinScheme } from './types.js';

/** Pixel geometry of one rendered panel. All pure math so the drag logic is
 *  testable without a canvas. */
export interface PanelLayout {
  width: number;
  height: number;
  plotLeft: number;
  plotRight: number;
  plotTop: number;
  plotBottom: number;
  domainMin: number;
  domainMax: number;
}

export const EDGE_HIT_TOLERANCE = 6;

const MARGIN = { left: 14, right: 14, top: 10, bottom: 26 };

/** Shared x-extent across panels so chosen and alternative line up. */
export function sharedDomain(schemes: BinScheme[], dataMin: number, dataMax: number): [number, number] {
  let lo = dataMin;
  let hi = dataMax;
  for (const s of schemes) {
    lo = Math.min(lo, s.edges[0]);
    hi = Math.max(hi, s.edges[s.edges.length - 1]);
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

export function makeLayout(
  width: number,
  height: number,
  domain: [number, number],
): PanelLayout {
  return {
    width,
    height,
    plotLeft: MARGIN.left,
    plotRight: width - MARGIN.right,
    plotTop: MARGIN.top,
    plotBottom: height - MARGIN.bottom,
    domainMin: domain[0],
    domainMax: domain[1],
  };
}

export function xToPixel(layout: PanelLayout, x: number): number {
  const f = (x - layout.domainMin) / (layout.domainMax - layout.domainMin);
  return layout.plotLeft + f * (layout.plotRight - layout.plotLeft);
}

export function pixelToX(layout: PanelLayout, px: number): number {
  const f = (px - layout.plotLeft) / (layout.plotRight - layout.plotLeft);
  return layout.domainMin + f * (layout.domainMax - layout.domainMin);
}

/** Index of the edge whose pixel position is within tolerance of px. */
export function hitTestEdge(
  layout: PanelLayout,
  scheme: BinScheme,
  px: number,
  tolerance: number = EDGE_HIT_TOLERANCE,
): number | null {
  let best: number | null = null;
  let bestDist = tolerance + 1;
  scheme.edges.forEach((edge, i) => {
    const dist = Math.abs(xToPixel(layout, edge) - px);
    if (dist <= tolerance && dist < bestDist) {
      best = i;
      bestDist = dist;
    }
  });
  return best;
}

const BAR_FILL = '#4e79a7';
const BAR_FILL_ALT = '#9ecae9';
const OPEN_HATCH = '#f28e2b';
const EDGE_COLOR = '#2f2f2f';
const AXIS_COLOR = '#9a9a9a';
const LABEL_FONT = '10px system-ui, sans-serif';

export interface RenderOptions {
  alternative?: boolean;
  draggable?: boolean;
  highlightEdge?: number | null;
}

/** Canvas histogram panel: bars per bin, hatched caps on open-ended bins,
 *  draggable edge handles. */
export class HistogramPanel {
  readonly canvas: HTMLCanvasElement;
  private ctx: CanvasRenderingContext2D;
  layout: PanelLayout;

  constructor(canvas: HTMLCanvasElement, domain: [number, number]) {
    this.canvas = canvas;
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new Error('canvas 2d context not available');
    this.ctx = ctx;
    this.layout = makeLayout(canvas.width, canvas.height, domain);
  }

  setDomain(domain: [number, number]): void {
    this.layout = makeLayout(this.canvas.width, this.canvas.height, domain);
  }

  render(scheme: BinScheme, counts: BinCounts, opts: RenderOptions = {}): void {
    const { ctx, layout } = this;
    ctx.clearRect(0, 0, layout.width, layout.height);
    const maxCount = Math.max(1, ...counts.counts);
    const plotHeight = layout.plotBottom - layout.plotTop;

    for (let i = 0; i < counts.counts.length; i++) {
      const x0 = xToPixel(layout, scheme.edges[i]);
      const x1 = xToPixel(layout, scheme.edges[i + 1]);
      const h = (counts.counts[i] / maxCount) * plotHeight;
      const y = layout.plotBottom - h;
      ctx.fillStyle = opts.alternative ? BAR_FILL_ALT : BAR_FILL;
      ctx.fillRect(x0 + 1, y, Math.max(1, x1 - x0 - 2), h);
      const openLow = scheme.open_low && i === 0;
      const openHigh = scheme.open_high && i === counts.counts.length - 1;
      if (openLow || openHigh) {
        this.hatchCap(openHigh ? x1 - 8 : x0 + 1, y, 7, h);
      }
    }

    ctx.strokeStyle = AXIS_COLOR;
    ctx.beginPath();
    ctx.moveTo(layout.plotLeft, layout.plotBottom + 0.5);
    ctx.lineTo(layout.plotRight, layout.plotBottom + 0.5);
    ctx.stroke();

    ctx.font = LABEL_FONT;
    ctx.fillStyle = EDGE_COLOR;
    scheme.edges.forEach((edge, i) => {
      const px = xToPixel(layout, edge);
      ctx.strokeStyle = i === opts.highlightEdge ? OPEN_HATCH : EDGE_COLOR;
      ctx.lineWidth = i === opts.highlightEdge ? 2 : 1;
      ctx.beginPath();
      ctx.moveTo(px + 0.5, layout.plotTop);
      ctx.lineTo(px + 0.5, layout.plotBottom);
      ctx.stroke();
      ctx.textAlign = 'center';
      ctx.fillText(String(edge), px, layout.plotBottom + 12);
    });
    ctx.lineWidth = 1;

    ctx.textAlign = 'center';
    counts.counts.forEach((count, i) => {
      const mid = (xToPixel(layout, scheme.edges[i]) + xToPixel(layout, scheme.edges[i + 1])) / 2;
      ctx.fillText(scheme.labels[i] ?? '', mid, layout.plotBottom + 24);
      const h = (count / maxCount) * plotHeight;
      ctx.fillText(String(count), mid, layout.plotBottom - h - 3);
    });
  }

  private hatchCap(x: number, y: number, w: number, h: number): void {
    const { ctx } = this;
    ctx.save();
    ctx.strokeStyle = OPEN_HATCH;
    ctx.beginPath();
    for (let off = 0; off < w + h; off += 4) {
      ctx.moveTo(x + Math.min(off, w), y + Math.max(0, off - w));
      ctx.lineTo(x + Math.max(0, off - h), y + Math.min(off, h));
    }
    ctx.stroke();
    ctx.restore();
  }
}
