import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import { canonicalSchemeJson } from '../src/export.js';
import type { BinScheme } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));

function fixture(name: string): string {
  // Server files end with a newline; the wire payload itself does not.
  return readFileSync(join(here, 'fixtures', name), 'utf-8').trimEnd();
}

describe('scheme export', () => {
  it('round-trips the server serialization byte-identically', () => {
    const text = fixture('scheme.json');
    const scheme = JSON.parse(text) as BinScheme;
    expect(JSON.stringify(scheme)).toBe(text);
    expect(canonicalSchemeJson(scheme)).toBe(text);
  });

  it('matches the server bytes for fractional edges too', () => {
    const text = fixture('scheme_fractional.json');
    const scheme = JSON.parse(text) as BinScheme;
    expect(canonicalSchemeJson(scheme)).toBe(text);
  });

  it('normalizes key order on locally assembled objects', () => {
    const text = fixture('scheme.json');
    const parsed = JSON.parse(text) as BinScheme;
    const shuffled = {
      provenance: parsed.provenance,
      labels: parsed.labels,
      open_high: parsed.open_high,
      open_low: parsed.open_low,
      edges: parsed.edges,
    } as BinScheme;
    expect(canonicalSchemeJson(shuffled)).toBe(text);
  });

  it('preserves manual provenance', () => {
    const scheme = JSON.parse(fixture('scheme.json')) as BinScheme;
    expect(scheme.provenance.kind).toBe('manual');
    expect(JSON.parse(canonicalSchemeJson(scheme)).provenance).toEqual({ kind: 'manual', ref: '' });
  });
});
