import type { BinResponse, DatasetInfo, Purpose, RefineResponse } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (body && typeof body.detail === 'string') detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, detail);
}

export interface RefineRequest {
  dataset_id: string;
  field: string;
  edges: number[];
  open_low: boolean;
  open_high: boolean;
  toggles: Record<string, boolean>;
}

/** Thin typed client for the binsmith service; fetch is injectable so tests
 *  can run without a network. */
export class ApiClient {
  constructor(
    private baseUrl = '',
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  async uploadDataset(csv: string | Blob): Promise<DatasetInfo> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/dataset`, {
      method: 'POST',
      headers: { 'Content-Type': 'text/csv' },
      body: csv,
    });
    await raiseForStatus(resp);
    return resp.json();
  }

  async bin(req: {
    dataset_id: string;
    field: string;
    purpose?: Purpose;
    forced_mode?: 'semantic' | 'default';
  }): Promise<BinResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/bin`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(req),
    });
    await raiseForStatus(resp);
    return resp.json();
  }

  async refine(req: RefineRequest): Promise<RefineResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/refine`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(req),
    });
    await raiseForStatus(resp);
    return resp.json();
  }
}
