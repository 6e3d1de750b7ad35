/**
 * Canvas state: the story draft being edited, the preview cache, and the
 * dirty flag. Edits mirror the server's semantics (including action
 * reference checks) so a draft that passes here also saves cleanly.
 */

import { ApiClient } from "./api";
import type { ComponentDoc, RenderPayload, StoryDoc, StoryEnvelope } from "./types";

const CHAINABLE = new Set(["text_search", "action"]);

export class EditError extends Error {}

function checkComponents(components: ComponentDoc[]): void {
  const seen = new Map<string, string>();
  for (const comp of components) {
    if (!comp.id) throw new EditError("component id must be non-empty");
    if (seen.has(comp.id)) throw new EditError(`duplicate component id ${comp.id}`);
    if (comp.type === "action") {
      const sourceType = seen.get(comp.source);
      if (sourceType === undefined) {
        throw new EditError(
          `action ${comp.id} sources ${comp.source}, which does not precede it`,
        );
      }
      if (!CHAINABLE.has(sourceType)) {
        throw new EditError(`action ${comp.id} may only source a text search or action`);
      }
    }
    seen.set(comp.id, comp.type);
  }
}

export class CanvasState {
  draft: StoryDoc;
  revision: number;
  owner: string | null;
  dirty = false;
  selected: string | null = null;
  previews = new Map<string, RenderPayload>();

  constructor(envelope: StoryEnvelope) {
    this.draft = structuredClone(envelope.story);
    this.revision = envelope.revision;
    this.owner = envelope.owner;
  }

  componentIds(): string[] {
    return this.draft.components.map((c) => c.id);
  }

  component(id: string): ComponentDoc {
    const comp = this.draft.components.find((c) => c.id === id);
    if (!comp) throw new EditError(`unknown component ${id}`);
    return comp;
  }

  freshId(type: string): string {
    let n = 1;
    const taken = new Set(this.componentIds());
    while (taken.has(`${type}-${n}`)) n += 1;
    return `${type}-${n}`;
  }

  private apply(components: ComponentDoc[]): void {
    checkComponents(components);
    this.draft.components = components;
    this.dirty = true;
  }

  addComponent(comp: ComponentDoc, position?: number): void {
    const next = [...this.draft.components];
    const at = position ?? next.length;
    if (at < 0 || at > next.length) throw new EditError(`position ${at} out of range`);
    next.splice(at, 0, comp);
    this.apply(next);
  }

  updateComponent(id: string, comp: ComponentDoc): void {
    const index = this.draft.components.findIndex((c) => c.id === id);
    if (index < 0) throw new EditError(`unknown component ${id}`);
    const next = [...this.draft.components];
    next[index] = { ...comp, id };
    this.apply(next);
    this.previews.delete(id);
  }

  removeComponent(id: string): void {
    const index = this.draft.components.findIndex((c) => c.id === id);
    if (index < 0) throw new EditError(`unknown component ${id}`);
    const next = [...this.draft.components];
    next.splice(index, 1);
    this.apply(next);
    this.previews.delete(id);
  }

  moveComponent(id: string, position: number): void {
    const index = this.draft.components.findIndex((c) => c.id === id);
    if (index < 0) throw new EditError(`unknown component ${id}`);
    if (position < 0 || position > this.draft.components.length) {
      throw new EditError(`position ${position} out of range`);
    }
    const next = [...this.draft.components];
    const [comp] = next.splice(index, 1);
    next.splice(Math.min(position, next.length), 0, comp);
    this.apply(next);
  }

  /** Palette changes restyle cached chart previews; nothing re-queries. */
  setPalette(colors: string[]): void {
    this.draft.palette = [...colors];
    this.dirty = true;
  }

  setMetadata(fields: {
    title?: string; subtitle?: string | null;
    description?: string | null; section?: string | null;
  }): void {
    Object.assign(this.draft, fields);
    this.dirty = true;
  }

  cachePreview(id: string, payload: RenderPayload): void {
    this.previews.set(id, payload);
  }

  /** PUT the draft with the loaded revision; conflicts surface to the UI. */
  async save(api: ApiClient): Promise<number> {
    const result = await api.putStory(this.draft, this.revision);
    this.revision = result.revision;
    this.dirty = false;
    return this.revision;
  }

  async reload(api: ApiClient): Promise<void> {
    const envelope = await api.getStory(this.draft.id);
    this.draft = structuredClone(envelope.story);
    this.revision = envelope.revision;
    this.owner = envelope.owner;
    this.dirty = false;
    this.previews.clear();
  }
}
