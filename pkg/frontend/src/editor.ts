/**
 * The story canvas: an ordered list of component cards with edit forms,
 * live previews through the service preview route, reordering, palette
 * picking, save with optimistic concurrency, and export/publish buttons.
 */

import { ApiClient, ApiError, RevisionConflictError } from "./api";
import { buildForm, type ComponentForm } from "./forms";
import { CanvasState, EditError } from "./state";
import {
  copyEmbedSnippet,
  downloadComponentImage,
  downloadStory,
  triggerDownload,
} from "./exports";
import { renderPayload, type CellClick } from "./render/index";
import type { CellDoc, ComponentDoc, ComponentType, RenderPayload } from "./types";
import { COMPONENT_TYPES } from "./types";

function button(label: string, className: string, onClick: () => void): HTMLButtonElement {
  const el = document.createElement("button");
  el.type = "button";
  el.textContent = label;
  el.className = className;
  el.addEventListener("click", onClick);
  return el;
}

export class Editor {
  readonly root: HTMLElement;
  readonly api: ApiClient;
  readonly state: CanvasState;
  private list!: HTMLElement;
  private status!: HTMLElement;
  private renderedSvgs = new Map<string, SVGSVGElement>();

  constructor(root: HTMLElement, api: ApiClient, state: CanvasState) {
    this.root = root;
    this.api = api;
    this.state = state;
    this.mount();
  }

  private mount(): void {
    this.root.replaceChildren();
    this.root.className = "editor";

    const header = document.createElement("header");
    header.className = "editor-header";
    const title = document.createElement("h1");
    title.textContent = this.state.draft.title;
    header.appendChild(title);
    header.appendChild(this.buildToolbar());
    this.status = document.createElement("p");
    this.status.className = "editor-status";
    header.appendChild(this.status);
    this.root.appendChild(header);

    this.root.appendChild(this.buildPalettePicker());
    this.root.appendChild(this.buildAddBar());

    this.list = document.createElement("main");
    this.list.className = "canvas";
    this.root.appendChild(this.list);
    this.repaintList();
  }

  // -- toolbar ---------------------------------------------------------------

  private buildToolbar(): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "toolbar";
    bar.appendChild(button("Save", "save", () => void this.save()));
    for (const format of ["html", "pdf", "json"] as const) {
      bar.appendChild(button(
        `Export ${format.toUpperCase()}`, `export-${format}`,
        () => void downloadStory(this.api, this.state.draft.id, format),
      ));
    }
    const publish = button("Publish", "publish", () => void this.publish());
    if (this.api.isAnonymous) {
      publish.disabled = true;
      publish.title = "Sign in to publish; anonymous sessions can export only";
    }
    bar.appendChild(publish);
    return bar;
  }

  private async save(): Promise<void> {
    try {
      const revision = await this.state.save(this.api);
      this.note(`saved (revision ${revision})`);
    } catch (error) {
      if (error instanceof RevisionConflictError) {
        this.note("someone else saved this story; reload to pick up their changes", true);
        const reload = button("Reload", "reload", () => {
          void this.state.reload(this.api).then(() => this.mount());
        });
        this.status.appendChild(reload);
        return;
      }
      this.note(describeError(error), true);
    }
  }

  private async publish(): Promise<void> {
    try {
      const result = await this.api.publish(this.state.draft.id);
      this.note(`published to ${result.url}`);
    } catch (error) {
      this.note(describeError(error), true);
    }
  }

  private note(message: string, isError = false): void {
    this.status.textContent = message;
    this.status.classList.toggle("error", isError);
  }

  // -- palette ---------------------------------------------------------------

  private buildPalettePicker(): HTMLElement {
    const wrap = document.createElement("section");
    wrap.className = "palette-picker";
    const caption = document.createElement("span");
    caption.textContent = "Palette";
    wrap.appendChild(caption);
    this.state.draft.palette.forEach((color, i) => {
      const input = document.createElement("input");
      input.type = "color";
      input.value = color;
      input.addEventListener("input", () => {
        const palette = [...this.state.draft.palette];
        palette[i] = input.value;
        this.state.setPalette(palette);
        this.restyleCharts();
      });
      wrap.appendChild(input);
    });
    return wrap;
  }

  /** Palette edits re-render cached chart previews; no query re-runs. */
  private restyleCharts(): void {
    for (const [cid, payload] of this.state.previews) {
      if (payload.kind !== "series") continue;
      const host = this.list.querySelector<HTMLElement>(
        `[data-component-id="${cid}"] .preview`,
      );
      if (host) this.paintPreview(host, cid, payload);
    }
  }

  // -- component list ----------------------------------------------------------

  private buildAddBar(): HTMLElement {
    const bar = document.createElement("section");
    bar.className = "add-bar";
    for (const type of COMPONENT_TYPES) {
      bar.appendChild(button(
        `+ ${type.replace("_", " ")}`, `add-${type}`,
        () => this.addComponent(type),
      ));
    }
    return bar;
  }

  private addComponent(type: ComponentType): void {
    const id = this.state.freshId(type);
    const blank: Record<ComponentType, () => ComponentDoc> = {
      text: () => ({ id, type: "text", html: "" }),
      counter: () => ({ id, type: "counter", label: "", query: "" }),
      chart: () => ({ id, type: "chart", chart_kind: "bar", title: "", query: "" }),
      table: () => ({ id, type: "table", title: "", query: "" }),
      map: () => ({ id, type: "map", query: "", filter_vars: [] }),
      text_search: () => ({ id, type: "text_search", query_template: "" }),
      action: () => ({
        id, type: "action", label: "", query_template: "",
        source: this.lastChainableId() ?? "", column: "",
      }),
    };
    try {
      this.state.addComponent(blank[type]());
    } catch (error) {
      this.note(describeError(error), true);
      return;
    }
    this.state.selected = id;
    this.repaintList();
  }

  private lastChainableId(): string | null {
    const chainable = this.state.draft.components.filter(
      (c) => c.type === "text_search" || c.type === "action",
    );
    return chainable.length ? chainable[chainable.length - 1].id : null;
  }

  private repaintList(): void {
    this.list.replaceChildren();
    this.state.draft.components.forEach((comp, index) => {
      this.list.appendChild(this.componentCard(comp, index));
    });
  }

  private componentCard(comp: ComponentDoc, index: number): HTMLElement {
    const card = document.createElement("article");
    card.className = `component-card component-${comp.type}`;
    card.dataset.componentId = comp.id;
    card.dataset.componentType = comp.type;

    const head = document.createElement("header");
    const caption = document.createElement("strong");
    caption.textContent = `${index + 1}. ${comp.type.replace("_", " ")} (${comp.id})`;
    head.appendChild(caption);

    head.appendChild(button("up", "move-up", () => {
      if (index > 0) this.moveTo(comp.id, index - 1);
    }));
    head.appendChild(button("down", "move-down", () => {
      this.moveTo(comp.id, index + 1);
    }));
    head.appendChild(button("edit", "edit", () => {
      this.state.selected = this.state.selected === comp.id ? null : comp.id;
      this.repaintList();
    }));
    head.appendChild(button("delete", "delete", () => {
      try {
        this.state.removeComponent(comp.id);
      } catch (error) {
        this.note(describeError(error), true);
        return;
      }
      this.repaintList();
    }));
    head.appendChild(this.componentExportMenu(comp));
    card.appendChild(head);

    const queryText =
      (comp as { query?: string }).query ??
      (comp as { query_template?: string }).query_template;
    if (queryText) {
      const details = document.createElement("details");
      details.className = "query";
      const summary = document.createElement("summary");
      summary.textContent = "View query";
      const pre = document.createElement("pre");
      pre.textContent = queryText;
      details.append(summary, pre);
      card.appendChild(details);
    }

    if (this.state.selected === comp.id) {
      card.appendChild(this.editPane(comp));
    }

    const preview = document.createElement("div");
    preview.className = "preview";
    card.appendChild(preview);
    const cached = this.state.previews.get(comp.id);
    if (cached) this.paintPreview(preview, comp.id, cached);

    return card;
  }

  private moveTo(id: string, position: number): void {
    try {
      this.state.moveComponent(id, position);
    } catch (error) {
      this.note(describeError(error), true);
      return;
    }
    this.repaintList();
  }

  private componentExportMenu(comp: ComponentDoc): HTMLElement {
    const menu = document.createElement("span");
    menu.className = "component-exports";
    if (comp.type === "chart" || comp.type === "table") {
      menu.appendChild(button("csv", "export-csv", async () => {
        const blob = await this.api.fetchComponentExport(
          this.state.draft.id, comp.id, "csv",
        );
        triggerDownload(blob, `${this.state.draft.id}-${comp.id}.csv`);
      }));
    }
    if (comp.type === "chart") {
      menu.appendChild(button("img", "export-img", async () => {
        const svg = this.renderedSvgs.get(comp.id);
        if (!svg) {
          this.note("preview the chart first, then download the image", true);
          return;
        }
        const produced = await downloadComponentImage(
          svg, `${this.state.draft.id}-${comp.id}`,
        );
        this.note(`image downloaded (${produced})`);
      }));
    }
    menu.appendChild(button("embed", "copy-embed", async () => {
      const snippet = await copyEmbedSnippet(this.api, this.state.draft.id, comp.id);
      this.note(`embed snippet ready: ${snippet.slice(0, 60)}...`);
    }));
    return menu;
  }

  // -- editing + preview ---------------------------------------------------------

  private editPane(comp: ComponentDoc): HTMLElement {
    const pane = document.createElement("section");
    pane.className = "edit-pane";
    const form = buildForm(comp.type);
    form.populate(comp);
    pane.appendChild(form.element);

    const actions = document.createElement("div");
    actions.className = "form-actions";
    actions.appendChild(button("Apply", "apply", () => {
      try {
        this.state.updateComponent(comp.id, form.read(comp.id));
      } catch (error) {
        form.setError(describeError(error));
        return;
      }
      this.repaintList();
    }));
    if (comp.type !== "text") {
      actions.appendChild(button("Preview", "preview", () => {
        void this.runPreview(comp.id, form);
      }));
    }
    form.element.appendChild(actions);
    return pane;
  }

  async runPreview(componentId: string, form: ComponentForm): Promise<void> {
    form.setError(null);
    const doc = form.read(componentId);
    const value = form.valueInput?.value || undefined;
    try {
      const { payload } = await this.api.preview(
        this.state.draft.endpoint, doc, value,
      );
      this.state.cachePreview(componentId, payload);
      const host = this.list.querySelector<HTMLElement>(
        `[data-component-id="${componentId}"] .preview`,
      );
      if (host) this.paintPreview(host, componentId, payload);
    } catch (error) {
      form.setError(describeError(error));  // inputs stay untouched
    }
  }

  paintPreview(host: HTMLElement, componentId: string, payload: RenderPayload): void {
    const comp = this.state.component(componentId);
    const title = (comp as { title?: string }).title ?? "";
    const onCellClick =
      comp.type === "text_search" || comp.type === "action"
        ? (click: CellClick) => void this.runAttachedAction(componentId, click)
        : undefined;
    const node = renderPayload(payload, this.state.draft.palette, { title, onCellClick });
    host.replaceChildren(node);
    if (payload.kind === "series" && node instanceof SVGSVGElement) {
      this.renderedSvgs.set(componentId, node);
    }
  }

  /** Clicking a result cell runs the first action sourced from that component. */
  private async runAttachedAction(sourceId: string, click: CellClick): Promise<void> {
    const action = this.state.draft.components.find(
      (c): c is Extract<ComponentDoc, { type: "action" }> =>
        c.type === "action" && c.source === sourceId && c.column === click.variable,
    );
    if (!action) return;
    const valueKind = cellValueKind(click.cell);
    try {
      const { payload } = await this.api.preview(
        this.state.draft.endpoint, action, click.cell.value, valueKind,
      );
      this.state.cachePreview(action.id, payload);
      const host = this.list.querySelector<HTMLElement>(
        `[data-component-id="${action.id}"] .preview`,
      );
      if (host) this.paintPreview(host, action.id, payload);
    } catch (error) {
      this.note(describeError(error), true);
    }
  }
}

function cellValueKind(cell: CellDoc): "uri" | "literal" {
  return cell.render === "link" || cell.render === "audio" ||
    cell.render === "video" || cell.render === "image"
    ? "uri"
    : "literal";
}

export function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    const detail = typeof error.body.detail === "string" ? `: ${error.body.detail}` : "";
    return `${error.body.error}${detail}`;
  }
  if (error instanceof EditError) return error.message;
  return error instanceof Error ? error.message : String(error);
}
