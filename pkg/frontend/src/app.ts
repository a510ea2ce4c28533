import { ApiClient } from './api.js';
import { downloadScheme } from './export.js';
import { HistogramPanel, hitTestEdge, pixelToX, sharedDomain } from './histogram.js';
import { RefineSession } from './state.js';
import type { Purpose, RefineResponse } from './types.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export class App {
  session: RefineSession;
  private chosenPanel: HistogramPanel;
  private alternativePanel: HistogramPanel;
  private dragIndex: number | null = null;

  constructor() {
    this.session = new RefineSession(new ApiClient(''));
    this.chosenPanel = new HistogramPanel(el<HTMLCanvasElement>('chosen-canvas'), [0, 1]);
    this.alternativePanel = new HistogramPanel(el<HTMLCanvasElement>('alternative-canvas'), [0, 1]);
    this.session.onChange(() => this.renderComparison());
    this.wire();
  }

  private wire(): void {
    el<HTMLInputElement>('file-input').addEventListener('change', (ev) => {
      const input = ev.target as HTMLInputElement;
      const file = input.files?.[0];
      if (file) void this.upload(file);
    });
    el<HTMLSelectElement>('field-select').addEventListener('change', (ev) => {
      const name = (ev.target as HTMLSelectElement).value;
      if (name) void this.session.selectField(name);
    });
    el<HTMLSelectElement>('purpose-select').addEventListener('change', (ev) => {
      const purpose = (ev.target as HTMLSelectElement).value as Purpose;
      if (this.session.field) void this.session.selectField(this.session.field, purpose);
    });
    for (const name of ['grainSnap', 'nice', 'zero'] as const) {
      el<HTMLInputElement>(`toggle-${name}`).addEventListener('change', (ev) => {
        this.session.toggles[name] = (ev.target as HTMLInputElement).checked;
      });
    }
    el<HTMLButtonElement>('export-button').addEventListener('click', () => {
      if (this.session.scheme) downloadScheme(this.session.scheme);
    });

    const canvas = this.chosenPanel.canvas;
    canvas.addEventListener('pointerdown', (ev) => {
      if (!this.session.scheme) return;
      const px = this.canvasX(canvas, ev);
      this.dragIndex = hitTestEdge(this.chosenPanel.layout, this.session.scheme, px);
      if (this.dragIndex !== null) canvas.setPointerCapture(ev.pointerId);
    });
    canvas.addEventListener('pointermove', (ev) => {
      if (this.dragIndex === null || !this.session.scheme) return;
      const value = pixelToX(this.chosenPanel.layout, this.canvasX(canvas, ev));
      const preview = this.session.previewDrag(this.dragIndex, value);
      this.renderComparison(this.dragIndex, preview);
    });
    canvas.addEventListener('pointerup', (ev) => {
      if (this.dragIndex === null) return;
      const index = this.dragIndex;
      this.dragIndex = null;
      const value = pixelToX(this.chosenPanel.layout, this.canvasX(canvas, ev));
      void this.session
        .dragBoundary(index, value)
        .then((outcome) => {
          if (outcome.response) this.showValidation(outcome.response);
        })
        .catch((err) => this.showError(String(err)));
    });
  }

  private canvasX(canvas: HTMLCanvasElement, ev: PointerEvent): number {
    const rect = canvas.getBoundingClientRect();
    return ((ev.clientX - rect.left) / rect.width) * canvas.width;
  }

  async upload(file: File): Promise<void> {
    try {
      const info = await this.session.upload(file);
      const select = el<HTMLSelectElement>('field-select');
      select.innerHTML = '<option value="">choose a field</option>';
      for (const name of this.session.numericFields()) {
        const opt = document.createElement('option');
        opt.value = name;
        opt.textContent = name;
        select.appendChild(opt);
      }
      el('dataset-info').textContent = `${info.rows} rows, ${info.fields.length} columns`;
    } catch (err) {
      this.showError(String(err));
    }
  }

  renderComparison(highlightEdge: number | null = null, previewValue: number | null = null): void {
    const response = this.session.response;
    if (!response) return;
    const scheme = previewValue !== null && highlightEdge !== null
      ? {
          ...response.scheme,
          edges: response.scheme.edges.map((e, i) => (i === highlightEdge ? previewValue : e)),
        }
      : response.scheme;
    const alternative = this.session.alternative;
    const schemes = alternative ? [scheme, alternative] : [scheme];
    const domain = sharedDomain(schemes, response.profile.min, response.profile.max);
    this.chosenPanel.setDomain(domain);
    this.alternativePanel.setDomain(domain);
    el('chosen-title').textContent =
      `${response.scheme.provenance.kind}${response.scheme.provenance.ref ? ` (${response.scheme.provenance.ref})` : ''}`;
    this.chosenPanel.render(scheme, response.counts, { highlightEdge });
    const altPanelWrap = el('alternative-panel');
    if (alternative && this.session.alternativeCounts) {
      altPanelWrap.classList.remove('hidden');
      el('alternative-title').textContent = alternative.provenance.kind;
      this.alternativePanel.render(alternative, this.session.alternativeCounts, { alternative: true });
    } else {
      altPanelWrap.classList.add('hidden');
      el('alternative-title').textContent = 'no semantic match';
    }
    this.showValidation(response as RefineResponse);
  }

  private showValidation(response: RefineResponse): void {
    const badge = el('violations');
    if (response.violations && response.violations.length) {
      badge.textContent = `violated: ${response.violations.join(', ')}`;
      badge.classList.add('warn');
    } else if (response.invariants) {
      const flags = Object.entries(response.invariants)
        .map(([k, ok]) => `${k}=${ok}`)
        .join(' ');
      badge.textContent = flags;
      badge.classList.remove('warn');
    } else {
      badge.textContent = '';
      badge.classList.remove('warn');
    }
  }

  private showError(message: string): void {
    el('violations').textContent = message;
    el('violations').classList.add('warn');
  }
}

if (typeof document !== 'undefined' && document.getElementById('chosen-canvas')) {
  new App();
}
