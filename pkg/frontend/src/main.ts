/** Browser entry point: wire the API, the state container, and the DOM.
 *
 * The auth token is the one piece of state that survives a reload;
 * everything else is refetched from the service.
 */

import { Api } from "./api.js";
import { ConsoleApp } from "./app.js";
import { mount } from "./dom.js";
import { type Actions, renderApp } from "./view.js";

const TOKEN_KEY = "odr_token";

function readToken(): string | null {
  const stored = window.localStorage.getItem(TOKEN_KEY);
  if (stored !== null) return stored === "" ? null : stored;
  const entered = window.prompt("API token (leave empty if the service runs open):") ?? "";
  window.localStorage.setItem(TOKEN_KEY, entered);
  return entered === "" ? null : entered;
}

function start(): void {
  const root = document.getElementById("root");
  if (root === null) throw new Error("missing #root element");
  const api = new Api({ baseUrl: "", token: readToken() });
  const app: ConsoleApp = new ConsoleApp(api, () => {
    mount(root, renderApp(app.state, actions));
  });
  const actions: Actions = {
    loadQueue: () => void app.loadQueue(),
    openCase: (caseId) => void app.openCase(caseId),
    closeCase: () => app.closeCase(),
    togglePendingOnly: () => app.togglePendingOnly(),
    setSummaryDraft: (text) => app.setSummaryDraft(text),
    submitRuling: (winner) => void app.submitRuling(winner),
    fileAppeal: (party) => void app.fileAppeal(party),
  };
  mount(root, renderApp(app.state, actions));
  void app.loadQueue();
}

start();
