/**
 * Bootstrap: hash routing between the homepage (published sidebar +
 * setup form) and the story editor. The auth token lives in
 * localStorage under "lodstory_token".
 */

import { ApiClient } from "./api";
import { CanvasState } from "./state";
import { Editor, describeError } from "./editor";
import { renderSetupForm, renderSidebar } from "./home";

function client(): ApiClient {
  return new ApiClient({
    token: localStorage.getItem("lodstory_token"),
    sessionId: localStorage.getItem("lodstory_session"),
  });
}

async function showHome(root: HTMLElement, api: ApiClient): Promise<void> {
  root.replaceChildren();
  const layout = document.createElement("div");
  layout.className = "home-layout";
  layout.appendChild(await renderSidebar(api, (storyId) => {
    location.hash = `#/edit/${storyId}`;
  }));
  const main = document.createElement("main");
  main.appendChild(renderSetupForm(api, ({ envelope }) => {
    if (api.sessionId) localStorage.setItem("lodstory_session", api.sessionId);
    location.hash = `#/edit/${envelope.story.id}`;
  }));
  const auth = document.createElement("p");
  auth.className = "auth-note";
  auth.textContent = api.isAnonymous
    ? "working anonymously: you can build and export stories, not publish them"
    : "signed in";
  main.appendChild(auth);
  layout.appendChild(main);
  root.appendChild(layout);
}

async function showEditor(root: HTMLElement, api: ApiClient, storyId: string): Promise<void> {
  try {
    const envelope = await api.getStory(storyId);
    new Editor(root, api, new CanvasState(envelope));
  } catch (error) {
    root.replaceChildren();
    const message = document.createElement("p");
    message.className = "error";
    message.textContent = describeError(error);
    root.appendChild(message);
  }
}

export async function route(root: HTMLElement): Promise<void> {
  const api = client();
  const match = location.hash.match(/^#\/edit\/([a-z0-9-]+)/);
  if (match) await showEditor(root, api, match[1]);
  else await showHome(root, api);
}

export function start(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  void route(root);
  window.addEventListener("hashchange", () => void route(root));
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  start();
}
