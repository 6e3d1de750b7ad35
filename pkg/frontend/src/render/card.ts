/** Counter card: a number with a label. */

import type { CardPayload } from "../types";

export function renderCard(payload: CardPayload): HTMLElement {
  const card = document.createElement("div");
  card.className = "card";
  const value = document.createElement("span");
  value.className = "card-value";
  value.textContent = Number.isInteger(payload.value)
    ? String(payload.value)
    : payload.value.toFixed(2);
  const label = document.createElement("span");
  label.className = "card-label";
  label.textContent = payload.label;
  card.append(value, label);
  return card;
}
