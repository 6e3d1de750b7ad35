/**
 * Wire types mirroring the service API: the story JSON schema (version 1)
 * and the render payload documents returned by /api/preview.
 */

export type ChartKind = "bar" | "line" | "scatter" | "doughnut";

export interface TextComponentDoc {
  id: string;
  type: "text";
  html: string;
}

export interface CounterComponentDoc {
  id: string;
  type: "counter";
  label: string;
  query: string;
}

export interface ChartComponentDoc {
  id: string;
  type: "chart";
  chart_kind: ChartKind;
  title: string;
  query: string;
}

export interface TableComponentDoc {
  id: string;
  type: "table";
  title: string;
  query: string;
}

export interface MapComponentDoc {
  id: string;
  type: "map";
  query: string;
  filter_vars: string[];
}

export interface TextSearchComponentDoc {
  id: string;
  type: "text_search";
  query_template: string;
}

export interface ActionComponentDoc {
  id: string;
  type: "action";
  label: string;
  query_template: string;
  source: string;
  column: string;
}

export type ComponentDoc =
  | TextComponentDoc
  | CounterComponentDoc
  | ChartComponentDoc
  | TableComponentDoc
  | MapComponentDoc
  | TextSearchComponentDoc
  | ActionComponentDoc;

export type ComponentType = ComponentDoc["type"];

export const COMPONENT_TYPES: ComponentType[] = [
  "text", "counter", "chart", "table", "map", "text_search", "action",
];

export const CHART_KINDS: ChartKind[] = ["bar", "line", "scatter", "doughnut"];

export interface StoryDoc {
  version: 1;
  id: string;
  title: string;
  subtitle: string | null;
  description: string | null;
  endpoint: string;
  section: string | null;
  palette: string[];
  components: ComponentDoc[];
}

export interface StoryEnvelope {
  story: StoryDoc;
  revision: number;
  owner: string | null;
}

export interface StoryListing {
  id: string;
  title: string;
  section: string | null;
  revision: number;
  owner: string | null;
}

// --- render payloads -------------------------------------------------------

export interface CardPayload {
  kind: "card";
  value: number;
  label: string;
}

export interface SeriesPayload {
  kind: "series";
  chart_kind: ChartKind;
  labels: string[];
  values: number[];
  dropped: number;
}

export type CellRenderKind =
  | "number" | "link" | "audio" | "video" | "image" | "geo" | "text";

export interface CellDoc {
  render: CellRenderKind;
  value: string;
  number?: number;
  url?: string;
  lat?: number;
  lon?: number;
}

export interface TablePayload {
  kind: "typed_table";
  vars: string[];
  rows: (CellDoc | null)[][];
}

export interface GeoPoint {
  lat: number;
  lon: number;
  metadata: Record<string, string>;
}

export interface GeoPayload {
  kind: "geo_set";
  points: GeoPoint[];
  facets: Record<string, string[]>;
  dropped: number;
}

export type RenderPayload = CardPayload | SeriesPayload | TablePayload | GeoPayload;

export interface SectionEntry {
  id: string;
  title: string;
  url: string;
}

export interface SiteIndex {
  sections: { section: string; stories: SectionEntry[] }[];
}

export interface ApiErrorBody {
  error: string;
  detail?: unknown;
  component_id?: string;
}
