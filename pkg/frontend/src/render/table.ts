/** Result tables with typed cells: media URLs become players/embeds. */

import type { CellDoc, TablePayload } from "../types";

export function renderCell(cell: CellDoc | null): HTMLElement {
  const td = document.createElement("td");
  if (!cell) return td;
  switch (cell.render) {
    case "number": {
      td.textContent = String(cell.number ?? cell.value);
      td.className = "cell-number";
      break;
    }
    case "audio": {
      const audio = document.createElement("audio");
      audio.controls = true;
      audio.src = cell.url ?? cell.value;
      td.appendChild(audio);
      break;
    }
    case "video": {
      const url = cell.url ?? cell.value;
      if (/youtube\.com|youtu\.be|vimeo\.com/i.test(url)) {
        const link = document.createElement("a");
        link.href = url;
        link.textContent = url;
        link.target = "_blank";
        link.rel = "noopener";
        td.appendChild(link);
      } else {
        const video = document.createElement("video");
        video.controls = true;
        video.width = 320;
        video.src = url;
        td.appendChild(video);
      }
      break;
    }
    case "image": {
      const img = document.createElement("img");
      img.src = cell.url ?? cell.value;
      img.alt = cell.value;
      img.loading = "lazy";
      td.appendChild(img);
      break;
    }
    case "link": {
      const link = document.createElement("a");
      link.href = cell.url ?? cell.value;
      link.textContent = cell.value;
      link.target = "_blank";
      link.rel = "noopener";
      td.appendChild(link);
      break;
    }
    default:
      td.textContent = cell.value;
  }
  return td;
}

export interface CellClick {
  variable: string;
  cell: CellDoc;
}

export function renderTable(
  payload: TablePayload,
  onCellClick?: (click: CellClick) => void,
): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "results";
  const head = table.createTHead().insertRow();
  for (const variable of payload.vars) {
    const th = document.createElement("th");
    th.textContent = variable;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of payload.rows) {
    const tr = body.insertRow();
    row.forEach((cell, column) => {
      const td = renderCell(cell);
      if (cell && onCellClick) {
        td.classList.add("clickable");
        td.addEventListener("click", () =>
          onCellClick({ variable: payload.vars[column], cell }),
        );
      }
      tr.appendChild(td);
    });
  }
  return table;
}
