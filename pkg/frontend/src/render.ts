// Pure HTML rendering: every function maps server data to markup strings.
// Similarity values render with exactly three decimals to match the run
// ledger files; highlight offsets slice the document text 1:1.

import type { AnnotationRecord, Candidate, QueueItem } from "./types.js";
import { bestSimilarity } from "./store.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function formatSimilarity(value: number): string {
  return value.toFixed(3);
}

export function renderCandidate(candidate: Candidate): string {
  const similarity = formatSimilarity(candidate.similarity);
  const width = Math.round(Math.max(0, Math.min(1, candidate.similarity)) * 100);
  return `
    <li class="candidate" data-entity-id="${escapeHtml(candidate.entity_id)}">
      <div class="candidate-head">
        <span class="candidate-label">${escapeHtml(candidate.label)}</span>
        <code class="candidate-id">${escapeHtml(candidate.entity_id)}</code>
        <span class="candidate-similarity" title="cosine similarity">${similarity}</span>
      </div>
      <div class="similarity-bar"><div class="similarity-fill" style="width:${width}%"></div></div>
      <p class="candidate-description">${escapeHtml(candidate.description)}</p>
      <div class="candidate-actions">
        <button data-action="select" data-entity-id="${escapeHtml(candidate.entity_id)}">select</button>
        <button data-action="disjoint" data-entity-id="${escapeHtml(candidate.entity_id)}">disjoint</button>
      </div>
    </li>`;
}

export function renderCard(item: QueueItem): string {
  const candidates = item.candidates.map(renderCandidate).join("");
  const fallback =
    item.decision === "no_match" && item.fallback_terms.length
      ? `<p class="fallback">related terms: ${item.fallback_terms
          .map(escapeHtml)
          .join(", ")}</p>`
      : "";
  const badge =
    item.decision === "no_match"
      ? '<span class="badge badge-no-match">no match</span>'
      : `<span class="badge badge-review">review · best ${formatSimilarity(bestSimilarity(item))}</span>`;
  return `
    <article class="card" data-item-id="${escapeHtml(item.item_id)}">
      <header>
        <h3>${escapeHtml(item.class_name)}</h3>
        <code>${escapeHtml(item.class_id)}</code>
        ${badge}
      </header>
      ${fallback}
      <ul class="candidates">${candidates}</ul>
      <footer class="card-actions">
        <button data-action="no_match">no match</button>
        <button data-action="skip">skip</button>
      </footer>
    </article>`;
}

export function renderQueue(items: QueueItem[]): string {
  if (items.length === 0) {
    return '<p class="empty">The review queue is empty.</p>';
  }
  return items.map(renderCard).join("\n");
}

/** Document text with <mark> highlights; non-highlighted segments and
 * highlight bodies concatenate back to the exact original text. */
export function renderDocument(text: string, annotations: AnnotationRecord[]): string {
  const spans = [...annotations].sort((a, b) => a.span[0] - b.span[0] || a.span[1] - b.span[1]);
  let cursor = 0;
  const parts: string[] = [];
  for (const annotation of spans) {
    const [start, end] = annotation.span;
    if (start < cursor) continue; // overlapping annotation; keep the first
    parts.push(escapeHtml(text.slice(cursor, start)));
    parts.push(
      `<mark class="highlight" data-class-id="${escapeHtml(annotation.class_id)}" ` +
        `data-method="${escapeHtml(annotation.method)}" ` +
        `title="${escapeHtml(annotation.reason)}">${escapeHtml(text.slice(start, end))}</mark>`,
    );
    cursor = end;
  }
  parts.push(escapeHtml(text.slice(cursor)));
  return `<pre class="document">${parts.join("")}</pre>`;
}

export function renderStatus(notice: string | null, error: string | null, version: number | null): string {
  const pieces: string[] = [];
  if (version !== null) pieces.push(`<span class="version">ontology v${version}</span>`);
  if (notice) pieces.push(`<span class="notice">${escapeHtml(notice)}</span>`);
  if (error) pieces.push(`<span class="error">${escapeHtml(error)}</span>`);
  return pieces.join(" ");
}
