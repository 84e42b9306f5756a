// Browser bootstrap: wires the store to the DOM.  All state changes flow
// through the service API; the page holds no truth of its own.

import { ApiClient } from "./api.js";
import { QueueStore, visibleItems, type SortKey, type StatusFilter } from "./store.js";
import { renderDocument, renderQueue, renderStatus } from "./render.js";

export function startApp(root: Document = document): QueueStore {
  const api = new ApiClient("");
  const store = new QueueStore(api);

  const queueEl = root.getElementById("queue")!;
  const statusEl = root.getElementById("status")!;
  const sortEl = root.getElementById("sort") as HTMLSelectElement;
  const filterEl = root.getElementById("filter") as HTMLSelectElement;
  const refreshEl = root.getElementById("refresh")!;
  const iterateEl = root.getElementById("iterate")!;
  const docFormEl = root.getElementById("doc-form") as HTMLFormElement;
  const docIdEl = root.getElementById("doc-id") as HTMLInputElement;
  const docViewEl = root.getElementById("doc-view")!;

  store.subscribe((state) => {
    queueEl.innerHTML = renderQueue(visibleItems(state));
    statusEl.innerHTML = renderStatus(state.notice, state.error, state.ontologyVersion);
    (iterateEl as HTMLButtonElement).disabled = state.busy;
  });

  sortEl.addEventListener("change", () => store.setSort(sortEl.value as SortKey));
  filterEl.addEventListener("change", () => store.setFilter(filterEl.value as StatusFilter));
  refreshEl.addEventListener("click", () => void store.refresh());
  iterateEl.addEventListener("click", () => void store.runIteration());

  queueEl.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    const card = target.closest<HTMLElement>("[data-item-id]");
    if (!card) return;
    const itemId = card.dataset.itemId!;
    const entityId = target.dataset.entityId;
    if (action === "select" && entityId) {
      void store.decide(itemId, { action: "select", entity_id: entityId });
    } else if (action === "disjoint" && entityId) {
      void store.decide(itemId, { action: "disjoint", entity_ids: [entityId] });
    } else if (action === "no_match" || action === "skip") {
      void store.decide(itemId, { action });
    }
  });

  docFormEl.addEventListener("submit", (event) => {
    event.preventDefault();
    const docId = docIdEl.value.trim();
    if (!docId) return;
    void (async () => {
      try {
        const [doc, annotations] = await Promise.all([
          api.getDocument(docId),
          api.getAnnotations(docId),
        ]);
        docViewEl.innerHTML = renderDocument(doc.text, annotations.annotations);
      } catch (err) {
        docViewEl.innerHTML = `<p class="error">${
          err instanceof Error ? err.message : String(err)
        }</p>`;
      }
    })();
  });

  void store.refresh();
  return store;
}

declare global {
  interface Window {
    contronStore?: QueueStore;
  }
}

if (typeof document !== "undefined" && document.getElementById("queue")) {
  window.contronStore = startApp();
}
