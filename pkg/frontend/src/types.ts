// Wire types mirrored from the review service API.

export interface Candidate {
  entity_id: string;
  label: string;
  description: string;
  aliases: string[];
  category_ids: string[];
  category_labels: string[];
  similarity: number;
}

export interface QueueItem {
  item_id: string;
  class_id: string;
  class_name: string;
  decision: "review" | "no_match";
  candidates: Candidate[];
  fallback_terms: string[];
  created_at: string;
  resolved: boolean;
  resolution: Resolution | null;
}

export interface Resolution {
  request: DecisionRequest;
  actor: string;
  timestamp: string;
  version_after: number;
}

export type DecisionAction = "select" | "disjoint" | "no_match" | "skip";

export interface DecisionRequest {
  action: DecisionAction;
  entity_id?: string | null;
  entity_ids?: string[] | null;
  actor?: string;
}

export interface DecisionResponse {
  item: QueueItem;
  replayed: boolean;
  version_before?: number;
  version_after?: number;
}

export interface OntologyClass {
  class_id: string;
  name: string;
  labels: string[];
  alt_labels: string[];
  synonyms: string[];
  categories: string[];
  description: string | null;
  matched_entity: string | null;
  disjoint_entities: string[];
  review_status: string;
  parent: string | null;
  intrinsic: boolean;
}

export interface OntologyPayload {
  ontology_id: string;
  version: number;
  imports: string[];
  classes: OntologyClass[];
}

export interface HistoryEntry {
  version: number;
  actor: string;
  timestamp: string;
  action: string;
  class_id: string | null;
}

export interface HistoryPayload {
  version: number;
  entries: HistoryEntry[];
}

export interface RunInfo {
  run_id: string;
  kind: "enrich" | "extract";
  state: "running" | "done" | "error";
  started_at: string;
  finished_at: string | null;
  summary: Record<string, unknown>;
}

export interface AnnotationRecord {
  span: [number, number];
  class_id: string;
  method: string;
  reason: string;
}

export interface AnnotationsPayload {
  doc_id: string;
  annotations: AnnotationRecord[];
}

export interface DocumentPayload {
  doc_id: string;
  category: string | null;
  text: string;
}
