import type { BinScheme } from './types.js';

/**
 * Serialize a scheme exactly as the server does: compact separators and the
 * server's key order. Schemes received from the API keep their key order
 * through JSON.parse, so stringifying them round-trips byte-identically;
 * this helper also normalizes locally assembled objects.
 */
export function canonicalSchemeJson(scheme: BinScheme): string {
  return JSON.stringify({
    edges: scheme.edges,
    open_low: scheme.open_low,
    open_high: scheme.open_high,
    labels: scheme.labels,
    provenance: { kind: scheme.provenance.kind, ref: scheme.provenance.ref },
  });
}

/** Trigger a browser download of the scheme JSON. */
export function downloadScheme(scheme: BinScheme, filename = 'bin-scheme.json'): void {
  const blob = new Blob([canonicalSchemeJson(scheme)], { type: 'application/json' });
  const url = URL.createObjectURL(blob);
  const a = document.createElement('a');
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}
