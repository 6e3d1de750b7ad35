/**
 * Home view: the sidebar of published stories grouped by section (with a
 * modify button for signed-in users) and the setup form that starts a
 * new story.
 */

import { ApiClient } from "./api";
import { describeError } from "./editor";
import type { SiteIndex, StoryEnvelope } from "./types";

export async function renderSidebar(
  api: ApiClient, onModify: (storyId: string) => void,
): Promise<HTMLElement> {
  const nav = document.createElement("nav");
  nav.className = "published-sidebar";
  const heading = document.createElement("h2");
  heading.textContent = "Published stories";
  nav.appendChild(heading);

  let index: SiteIndex;
  try {
    index = await api.sections();
  } catch {
    index = { sections: [] };
  }
  if (!index.sections.length) {
    const empty = document.createElement("p");
    empty.className = "sidebar-empty";
    empty.textContent = "nothing published yet";
    nav.appendChild(empty);
    return nav;
  }
  for (const section of index.sections) {
    const title = document.createElement("h3");
    title.textContent = section.section;
    nav.appendChild(title);
    const list = document.createElement("ul");
    for (const story of section.stories) {
      const item = document.createElement("li");
      const link = document.createElement("a");
      link.href = story.url;
      link.textContent = story.title;
      item.appendChild(link);
      if (!api.isAnonymous) {
        const modify = document.createElement("button");
        modify.type = "button";
        modify.className = "modify";
        modify.textContent = "modify";
        modify.addEventListener("click", () => onModify(story.id));
        item.appendChild(modify);
      }
      list.appendChild(item);
    }
    nav.appendChild(list);
  }
  return nav;
}

export interface SetupResult {
  envelope: StoryEnvelope;
}

export function renderSetupForm(
  api: ApiClient, onCreated: (result: SetupResult) => void,
): HTMLElement {
  const form = document.createElement("form");
  form.className = "setup-form";
  const heading = document.createElement("h2");
  heading.textContent = "Create a data story";
  form.appendChild(heading);

  const rows: [string, HTMLInputElement | HTMLSelectElement][] = [];
  const add = (label: string, control: HTMLInputElement | HTMLSelectElement) => {
    const wrap = document.createElement("label");
    wrap.className = "field";
    const caption = document.createElement("span");
    caption.textContent = label;
    wrap.append(caption, control);
    form.appendChild(wrap);
    rows.push([label, control]);
    return control;
  };

  const template = document.createElement("select");
  const option = document.createElement("option");
  option.value = "statistics";
  option.textContent = "statistics (all components)";
  template.appendChild(option);
  add("Template", template);

  const section = add("Section (members group stories by theme)",
    document.createElement("input")) as HTMLInputElement;
  const title = add("Title", document.createElement("input")) as HTMLInputElement;
  const endpoint = add("SPARQL endpoint URL",
    document.createElement("input")) as HTMLInputElement;
  endpoint.placeholder = "https://example.org/sparql";

  const error = document.createElement("p");
  error.className = "form-error";
  error.hidden = true;
  form.appendChild(error);

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Create";
  form.appendChild(submit);

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    error.hidden = true;
    try {
      const envelope = await api.createStory({
        template: template.value,
        title: title.value,
        endpoint: endpoint.value,
        section: section.value || null,
      });
      onCreated({ envelope });
    } catch (err) {
      error.hidden = false;
      error.textContent = describeError(err);
    }
  });
  return form;
}
