import { ApiClient } from './api.js';
import type {
  BinCounts,
  BinResponse,
  BinScheme,
  DatasetInfo,
  Purpose,
  RefineResponse,
  Toggles,
} from './types.js';

/** Snap a value to the nearest grain multiple. */
export function snapToGrain(value: number, grain: number): number {
  const snapped = Math.round(value / grain) * grain;
  // Knock out float artifacts like 25.500000000000004 for fractional grains.
  const decimals = Math.max(0, -Math.floor(Math.log10(grain)));
  return Number(snapped.toFixed(decimals + 2));
}

export interface DragOutcome {
  accepted: boolean;
  value: number;
  response: RefineResponse | null;
}

/**
 * One user session: upload a dataset, pick a field, drag boundaries,
 * export the final scheme.
 *
 * Every displayed count comes from a server response; the session never
 * tallies values client-side. At most one refine request is in flight:
 * drags arriving mid-request coalesce and the latest state is re-sent when
 * the running request settles.
 */
export class RefineSession {
  dataset: DatasetInfo | null = null;
  field: string | null = null;
  purpose: Purpose = 'histogram';
  response: BinResponse | RefineResponse | null = null;
  /** Server-computed counts for the road-not-taken scheme, if any. */
  alternativeCounts: BinCounts | null = null;
  toggles: Toggles = { grainSnap: true, nice: true, zero: true };

  private inFlight: Promise<RefineResponse> | null = null;
  private queuedEdges: number[] | null = null;
  private listeners: Array<() => void> = [];

  constructor(private api: ApiClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  async upload(csv: string | Blob): Promise<DatasetInfo> {
    this.dataset = await this.api.uploadDataset(csv);
    this.field = null;
    this.response = null;
    this.notify();
    return this.dataset;
  }

  numericFields(): string[] {
    if (!this.dataset) return [];
    return this.dataset.fields.filter((f) => f.numeric).map((f) => f.name);
  }

  async selectField(name: string, purpose: Purpose = this.purpose): Promise<BinResponse> {
    if (!this.dataset) throw new Error('no dataset uploaded');
    this.field = name;
    this.purpose = purpose;
    this.response = await this.api.bin({
      dataset_id: this.dataset.dataset_id,
      field: name,
      purpose,
    });
    // Counts for the alternative panel come from the server too.
    this.alternativeCounts = null;
    const alt = this.response.alternatives[0];
    if (alt) {
      const altResponse = await this.api.bin({
        dataset_id: this.dataset.dataset_id,
        field: name,
        purpose,
        forced_mode: alt.provenance.kind === 'semantic' ? 'semantic' : 'default',
      });
      this.alternativeCounts = altResponse.counts;
    }
    this.notify();
    return this.response;
  }

  get scheme(): BinScheme | null {
    return this.response?.scheme ?? null;
  }

  get alternative(): BinScheme | null {
    return this.response?.alternatives[0] ?? null;
  }

  /**
   * Clamp-and-snap preview of moving one edge; null when the move would
   * cross a neighbouring edge (the edit is rejected client-side).
   */
  previewDrag(index: number, value: number): number | null {
    const scheme = this.scheme;
    if (!scheme || index < 0 || index >= scheme.edges.length) return null;
    let v = value;
    if (this.toggles.grainSnap && this.response) {
      v = snapToGrain(v, this.response.profile.grain);
    }
    const lower = index > 0 ? scheme.edges[index - 1] : -Infinity;
    const upper = index < scheme.edges.length - 1 ? scheme.edges[index + 1] : Infinity;
    if (v <= lower || v >= upper) return null;
    return v;
  }

  /**
   * Move one boundary and refresh counts from the server. Edges stay
   * strictly increasing by construction; crossing drags return
   * `{accepted: false}` without issuing a request.
   */
  async dragBoundary(index: number, value: number): Promise<DragOutcome> {
    const scheme = this.scheme;
    if (!this.dataset || !this.field || !scheme) {
      throw new Error('no active scheme to refine');
    }
    const v = this.previewDrag(index, value);
    if (v === null) {
      return { accepted: false, value, response: null };
    }
    const edges = [...scheme.edges];
    edges[index] = v;
    const response = await this.submitEdges(edges, scheme);
    return { accepted: true, value: v, response };
  }

  private async submitEdges(edges: number[], scheme: BinScheme): Promise<RefineResponse> {
    if (this.inFlight) {
      // Debounce: remember only the latest requested state.
      this.queuedEdges = edges;
      const settled = await this.inFlight;
      return settled;
    }
    const request = this.api.refine({
      dataset_id: this.dataset!.dataset_id,
      field: this.field!,
      edges,
      open_low: scheme.open_low,
      open_high: scheme.open_high,
      toggles: { nice: this.toggles.nice, zero: this.toggles.zero },
    });
    this.inFlight = request.then(async (resp) => {
      this.inFlight = null;
      this.response = resp;
      this.notify();
      if (this.queuedEdges) {
        const next = this.queuedEdges;
        this.queuedEdges = null;
        return this.submitEdges(next, resp.scheme);
      }
      return resp;
    });
    try {
      return await this.inFlight;
    } catch (err) {
      this.inFlight = null;
      this.queuedEdges = null;
      throw err;
    }
  }

  /** Canonical JSON of the active scheme, byte-identical to the server's
   *  own serialization (same key order, compact separators). */
  exportScheme(): string {
    if (!this.scheme) throw new Error('no active scheme to export');
    return JSON.stringify(this.scheme);
  }
}
