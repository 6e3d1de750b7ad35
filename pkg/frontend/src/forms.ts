/**
 * One editing form per component kind. Every form except the text editor
 * carries an info box with field docs, the naming conventions it relies
 * on, and a usage example. Forms never clear entered text on errors.
 */

import { INFO_BOXES } from "./conventions";
import type { ChartKind, ComponentDoc, ComponentType } from "./types";
import { CHART_KINDS } from "./types";

export interface ComponentForm {
  element: HTMLFormElement;
  type: ComponentType;
  read(id: string): ComponentDoc;
  populate(doc: ComponentDoc): void;
  setError(message: string | null): void;
  /** Present on text_search/action forms: the tryout value input. */
  valueInput?: HTMLInputElement;
}

function field(
  form: HTMLFormElement, name: string, label: string,
  kind: "input" | "textarea" | "select" = "input",
  options: string[] = [],
): HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement {
  const wrap = document.createElement("label");
  wrap.className = "field";
  const caption = document.createElement("span");
  caption.textContent = label;
  wrap.appendChild(caption);
  let control: HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement;
  if (kind === "textarea") {
    control = document.createElement("textarea");
    control.rows = 5;
  } else if (kind === "select") {
    control = document.createElement("select");
    for (const option of options) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option;
      control.appendChild(el);
    }
  } else {
    control = document.createElement("input");
    (control as HTMLInputElement).type = "text";
  }
  control.name = name;
  wrap.appendChild(control);
  form.appendChild(wrap);
  return control;
}

function infoBox(form: HTMLFormElement, type: string): void {
  const spec = INFO_BOXES[type];
  if (!spec) return;
  const aside = document.createElement("aside");
  aside.className = "info-box";
  const heading = document.createElement("h4");
  heading.textContent = "How this component reads your query";
  aside.appendChild(heading);
  const fields = document.createElement("ul");
  fields.className = "info-fields";
  for (const line of spec.fields) {
    const li = document.createElement("li");
    li.textContent = line;
    fields.appendChild(li);
  }
  aside.appendChild(fields);
  if (spec.conventions.length) {
    const conventions = document.createElement("ul");
    conventions.className = "info-conventions";
    for (const line of spec.conventions) {
      const li = document.createElement("li");
      li.textContent = line;
      conventions.appendChild(li);
    }
    aside.appendChild(conventions);
  }
  const example = document.createElement("pre");
  example.className = "info-example";
  example.textContent = spec.example;
  aside.appendChild(example);
  form.appendChild(aside);
}

function errorSlot(form: HTMLFormElement): HTMLElement {
  const slot = document.createElement("p");
  slot.className = "form-error";
  slot.hidden = true;
  form.appendChild(slot);
  return slot;
}

export function buildForm(type: ComponentType): ComponentForm {
  const form = document.createElement("form");
  form.className = `component-form component-form-${type}`;
  form.dataset.componentType = type;
  form.addEventListener("submit", (event) => event.preventDefault());

  let read: (id: string) => ComponentDoc;
  let populate: (doc: ComponentDoc) => void;
  let valueInput: HTMLInputElement | undefined;

  if (type === "text") {
    const html = field(form, "html", "Curated text (HTML)", "textarea") as HTMLTextAreaElement;
    read = (id) => ({ id, type: "text", html: html.value });
    populate = (doc) => {
      if (doc.type === "text") html.value = doc.html;
    };
  } else if (type === "counter") {
    const label = field(form, "label", "Label") as HTMLInputElement;
    const query = field(form, "query", "SPARQL query", "textarea") as HTMLTextAreaElement;
    read = (id) => ({ id, type: "counter", label: label.value, query: query.value });
    populate = (doc) => {
      if (doc.type === "counter") {
        label.value = doc.label;
        query.value = doc.query;
      }
    };
  } else if (type === "chart") {
    const kind = field(form, "chart_kind", "Chart kind", "select", [...CHART_KINDS]) as HTMLSelectElement;
    const title = field(form, "title", "Title") as HTMLInputElement;
    const query = field(form, "query", "SPARQL query", "textarea") as HTMLTextAreaElement;
    read = (id) => ({
      id, type: "chart", chart_kind: kind.value as ChartKind,
      title: title.value, query: query.value,
    });
    populate = (doc) => {
      if (doc.type === "chart") {
        kind.value = doc.chart_kind;
        title.value = doc.title;
        query.value = doc.query;
      }
    };
  } else if (type === "table") {
    const title = field(form, "title", "Title") as HTMLInputElement;
    const query = field(form, "query", "SPARQL query", "textarea") as HTMLTextAreaElement;
    read = (id) => ({ id, type: "table", title: title.value, query: query.value });
    populate = (doc) => {
      if (doc.type === "table") {
        title.value = doc.title;
        query.value = doc.query;
      }
    };
  } else if (type === "map") {
    const query = field(form, "query", "SPARQL query", "textarea") as HTMLTextAreaElement;
    const filters = field(form, "filter_vars", "Filter variables (comma separated)") as HTMLInputElement;
    read = (id) => ({
      id, type: "map", query: query.value,
      filter_vars: filters.value.split(",").map((s) => s.trim()).filter(Boolean),
    });
    populate = (doc) => {
      if (doc.type === "map") {
        query.value = doc.query;
        filters.value = doc.filter_vars.join(", ");
      }
    };
  } else if (type === "text_search") {
    const template = field(form, "query_template", "Query template", "textarea") as HTMLTextAreaElement;
    valueInput = field(form, "value", "Try a search term") as HTMLInputElement;
    read = (id) => ({ id, type: "text_search", query_template: template.value });
    populate = (doc) => {
      if (doc.type === "text_search") template.value = doc.query_template;
    };
  } else {
    const label = field(form, "label", "Action label") as HTMLInputElement;
    const template = field(form, "query_template", "Query template", "textarea") as HTMLTextAreaElement;
    const source = field(form, "source", "Source component id") as HTMLInputElement;
    const column = field(form, "column", "Source column (variable)") as HTMLInputElement;
    valueInput = field(form, "value", "Try a cell value") as HTMLInputElement;
    read = (id) => ({
      id, type: "action", label: label.value, query_template: template.value,
      source: source.value, column: column.value,
    });
    populate = (doc) => {
      if (doc.type === "action") {
        label.value = doc.label;
        template.value = doc.query_template;
        source.value = doc.source;
        column.value = doc.column;
      }
    };
  }

  infoBox(form, type);
  const slot = errorSlot(form);

  return {
    element: form,
    type,
    read,
    populate,
    valueInput,
    setError(message: string | null) {
      slot.hidden = message === null;
      slot.textContent = message ?? "";
    },
  };
}
