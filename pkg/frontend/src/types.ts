/**
 * Wire types mirroring the binsmith HTTP API (see docs/schemas/ in the
 * server repo). The UI treats these as read-only: counts and schemes always
 * originate from server responses.
 */

export interface Provenance {
  kind: 'semantic' | 'default' | 'manual';
  ref: string;
}

export interface BinScheme {
  edges: number[];
  open_low: boolean;
  open_high: boolean;
  labels: string[];
  provenance: Provenance;
}

export interface BinCounts {
  counts: number[];
  below: number;
  above: number;
}

export interface FieldProfile {
  n: number;
  missing: number;
  min: number;
  max: number;
  mean: number;
  sd: number;
  iqr: number;
  grain: number;
}

export interface BinResponse {
  scheme: BinScheme;
  counts: BinCounts;
  alternatives: BinScheme[];
  profile: FieldProfile;
}

export interface RefineResponse extends BinResponse {
  invariants: Record<string, boolean>;
  violations: string[];
}

export interface DatasetField {
  name: string;
  numeric: boolean;
  profile: FieldProfile | null;
}

export interface DatasetInfo {
  dataset_id: string;
  rows: number;
  fields: DatasetField[];
}

export type Purpose = 'histogram' | 'color_ramp';

/** Client-side heuristic toggles; grainSnap acts locally, the rest are
 *  forwarded to /api/refine so the server reports matching flags. */
export interface Toggles {
  grainSnap: boolean;
  nice: boolean;
  zero: boolean;
}
