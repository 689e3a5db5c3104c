// DOM glue: event delegation over the rendered tree, persistence, and the
// debounced rescore loop. All logic lives in the imported modules.

import { ApiClient } from "./api.js";
import { loadPersisted, savePersisted } from "./persist.js";
import { renderApp } from "./render.js";
import { Rescorer } from "./rescore.js";
import { initialState, Store } from "./store.js";
import { DEFAULT_PREVALENCE, neshanSample } from "./sample.js";
import { TRANSIT_MODES, type Activity, type Mode } from "./types.js";

function intAttr(element: Element, name: string): number {
  return Number.parseInt(element.getAttribute(name) ?? "-1", 10);
}

export function mount(root: HTMLElement, api: ApiClient, storage: Storage): void {
  const persisted = loadPersisted(storage);
  const store = new Store(
    initialState(persisted?.drafts ?? neshanSample(), persisted?.prevalence ?? DEFAULT_PREVALENCE),
  );
  const rescorer = new Rescorer(store, api);

  store.subscribe((state) => {
    root.innerHTML = renderApp(state);
    savePersisted(storage, { drafts: state.drafts, prevalence: state.prevalence });
  });

  root.addEventListener("click", (event) => {
    const target = (event.target as Element).closest("[data-action]");
    if (!target) return;
    const route = intAttr(target, "data-route");
    const segment = intAttr(target, "data-segment");
    switch (target.getAttribute("data-action")) {
      case "load-sample":
        store.loadDrafts(neshanSample());
        break;
      case "route-add":
        store.addRoute();
        break;
      case "route-remove":
        store.removeRoute(route);
        break;
      case "seg-add":
        store.addSegment(route);
        break;
      case "seg-remove":
        store.removeSegment(route, segment);
        break;
      case "seg-up":
        store.moveSegment(route, segment, -1);
        break;
      case "seg-down":
        store.moveSegment(route, segment, 1);
        break;
      case "score-now":
        void rescorer.scoreNow();
        return;
      default:
        return;
    }
    rescorer.trigger();
  });

  root.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement | HTMLSelectElement;
    if (target.id === "prevalence") {
      store.setPrevalence(Number.parseFloat(target.value));
    } else if (target.id === "derived") {
      store.setDerived((target as HTMLInputElement).checked);
    } else if (target.id === "activity-walking") {
      store.setActivity("walking", (target.value || null) as Activity | null);
    } else if (target.id === "activity-transit") {
      for (const mode of TRANSIT_MODES) {
        store.setActivity(mode, (target.value || null) as Activity | null);
      }
    } else if (target.dataset.field) {
      const route = intAttr(target, "data-route");
      const segment = intAttr(target, "data-segment");
      const field = target.dataset.field;
      if (field === "mode") {
        store.updateSegment(route, segment, { mode: target.value as Mode });
      } else if (field === "kind") {
        store.updateSegment(route, segment, { kind: target.value as never });
      } else if (field === "value") {
        store.updateSegment(route, segment, { value: Number.parseFloat(target.value) });
      }
    } else {
      return;
    }
    rescorer.trigger();
  });

  // first paint + initial score
  root.innerHTML = renderApp(store.state);
  void rescorer.scoreNow();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  mount(document.getElementById("app") as HTMLElement, new ApiClient(base), window.localStorage);
}
