// End-to-end round trip against the real review service.  The service is
// spawned as a child process on a prepared data directory (offline fixture
// cache); the test drives the same ApiClient/QueueStore the browser app
// uses and renders the queue to check what the expert would see.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, copyFileSync, writeFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { QueueStore, visibleItems } from "../src/store.js";
import { renderQueue } from "../src/render.js";

const REPO_ROOT = resolve(__dirname, "..", "..");
const FIXTURES = join(REPO_ROOT, "tests", "fixtures");
const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;
let dataDir: string;

async function waitForService(): Promise<void> {
  for (let i = 0; i < 200; i += 1) {
    try {
      const response = await fetch(`${BASE}/api/queue`);
      if (response.ok) return;
    } catch {
      // still starting
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "contron-ui-"));
  copyFileSync(join(FIXTURES, "ontology", "core.json"), join(dataDir, "ontology.json"));
  writeFileSync(
    join(dataDir, "config.json"),
    JSON.stringify({
      manifest: join(FIXTURES, "corpus", "manifest.tsv"),
      cache_dir: join(FIXTURES, "kb_cache"),
      offline: true,
      threshold: 0.05,
    }),
  );
  service = spawn(
    "python3",
    [
      "-c",
      [
        "import sys, uvicorn",
        "from contron.service import create_app",
        `app = create_app(${JSON.stringify(dataDir)})`,
        `uvicorn.run(app, host='127.0.0.1', port=${PORT}, log_level='warning')`,
      ].join("\n"),
    ],
    { cwd: REPO_ROOT, stdio: ["ignore", "inherit", "inherit"] },
  );
  await waitForService();
}, 60_000);

afterAll(() => {
  service?.kill("SIGTERM");
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe("review round trip against the live service", () => {
  const api = new ApiClient(BASE);

  it("runs an enrichment iteration and populates the queue", async () => {
    const store = new QueueStore(api);
    await store.runIteration(100);
    const items = visibleItems(store.getState());
    expect(items.length).toBe(13);
    expect(items[0].class_id).toBe("core:hardware_interface"); // best similarity first
    expect(renderQueue(items)).toContain("Interface");
  }, 60_000);

  it("selecting a candidate confirms the class and removes the card", async () => {
    const store = new QueueStore(api);
    await store.refresh();
    const card = store
      .getState()
      .items.find((i) => i.class_id === "core:interface")!;
    expect(card).toBeDefined();

    const ok = await store.decide(card.item_id, {
      action: "select",
      entity_id: "Q-IFACE-HW",
      actor: "ui-test",
    });
    expect(ok).toBe(true);

    const ontology = await api.getOntology();
    const cls = ontology.classes.find((c) => c.class_id === "core:interface")!;
    expect(cls.review_status).toBe("expert_confirmed");
    expect(cls.matched_entity).toBe("Q-IFACE-HW");

    await store.refresh();
    const rendered = renderQueue(visibleItems(store.getState()));
    expect(rendered).not.toContain(card.item_id);
  }, 30_000);

  it("replaying the identical decision is idempotent", async () => {
    const queue = await api.getQueue(); // resolved card no longer listed
    expect(queue.items.some((i) => i.class_id === "core:interface")).toBe(false);

    const before = (await api.getOntology()).version;
    const replay = await api.postDecision("enrich-0001:core:interface", {
      action: "select",
      entity_id: "Q-IFACE-HW",
      actor: "ui-test",
    });
    expect(replay.replayed).toBe(true);
    expect((await api.getOntology()).version).toBe(before);
  }, 30_000);

  it("a conflicting decision on a stale card renders as refreshed resolved state", async () => {
    // a second expert still sees the stale card and tries a different action
    const staleStore = new QueueStore(api);
    await staleStore.refresh();
    const stale = {
      ...staleStore.getState(),
      items: [
        ...staleStore.getState().items,
        {
          item_id: "enrich-0001:core:interface",
          class_id: "core:interface",
          class_name: "Interface",
          decision: "review" as const,
          candidates: [],
          fallback_terms: [],
          created_at: "2026-01-01T00:00:00+00:00",
          resolved: false,
          resolution: null,
        },
      ],
    };
    // direct API call shows the 409...
    await expect(
      api.postDecision("enrich-0001:core:interface", { action: "skip" }),
    ).rejects.toMatchObject({ status: 409 });

    // ...and the store path translates it into the refreshed server truth
    void stale;
    const ok = await staleStore.decide("enrich-0001:core:interface", { action: "skip" });
    expect(ok).toBe(false);
    expect(staleStore.getState().notice).toContain("already resolved");
    const rendered = renderQueue(visibleItems(staleStore.getState()));
    expect(rendered).not.toContain("enrich-0001:core:interface");
  }, 30_000);

  it("serves annotated documents for the viewer", async () => {
    await api.runPipeline("extract");
    const [doc, annotations] = await Promise.all([
      api.getDocument("st100"),
      api.getAnnotations("st100"),
    ]);
    expect(doc.text).toContain("Life span: 5 Years");
    const reasons = annotations.annotations.map((a) => a.reason);
    expect(reasons).toContain(
      "The highlighted text (Life span: 5 Years) is corresponding to the Lifetime property",
    );
    for (const a of annotations.annotations) {
      expect(a.span[0]).toBeGreaterThanOrEqual(0);
      expect(a.span[1]).toBeGreaterThan(a.span[0]);
      expect(a.span[1]).toBeLessThanOrEqual(doc.text.length);
    }
  }, 30_000);
});
