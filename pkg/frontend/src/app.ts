/**
 * Blinded realism survey, single page: show one image plus its crop name,
 * take a 1-5 rating, advance. Raters never see where an image came from;
 * everything rendered here is limited to what the rating API returns
 * (item id, category name, image URL, progress).
 *
 * The session id persists in browser storage so a refresh resumes at the
 * server's cursor. Ratings wait for the server acknowledgment before the
 * next item loads; a failed submission is kept and retried, never lost.
 */

export interface ItemView {
  item_id: string;
  category: string;
  image_url: string;
  position: number;
  total: number;
}

export interface NextResponse {
  done: boolean;
  item: ItemView | null;
}

export interface SessionResponse {
  session_id: string;
  total: number;
}

export interface AppOptions {
  fetchFn?: typeof fetch;
  storage?: Storage;
  baseUrl?: string;
}

export const SESSION_STORAGE_KEY = "realism-survey.session";

export const SCORE_LABELS: ReadonlyArray<readonly [number, string]> = [
  [1, "Not at all realistic"],
  [2, "Slightly realistic"],
  [3, "Moderately realistic"],
  [4, "Very realistic"],
  [5, "Extremely realistic"],
];

export class SurveyApp {
  private readonly root: HTMLElement;
  private readonly fetchFn: typeof fetch;
  private readonly storage: Storage;
  private readonly base: string;

  private sessionId: string | null = null;
  private current: ItemView | null = null;
  private submitting = false;
  private readonly onKeyDown: (event: KeyboardEvent) => void;

  constructor(root: HTMLElement, options: AppOptions = {}) {
    this.root = root;
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
    this.storage = options.storage ?? window.localStorage;
    this.base = options.baseUrl ?? "";
    this.onKeyDown = (event: KeyboardEvent) => {
      const score = Number(event.key);
      if (score >= 1 && score <= 5) {
        void this.submit(score);
      }
    };
  }

  /** Entry point: resume a stored session or show the start form. */
  async start(): Promise<void> {
    const stored = this.storage.getItem(SESSION_STORAGE_KEY);
    if (stored) {
      this.sessionId = stored;
      await this.advance();
      return;
    }
    this.renderStart();
  }

  dispose(): void {
    window.removeEventListener("keydown", this.onKeyDown);
  }

  // --- screens ---------------------------------------------------------

  private renderStart(notice?: string): void {
    this.dispose();
    this.sessionId = null;
    this.current = null;
    this.root.replaceChildren();

    const box = el("div", "panel start-panel");
    box.appendChild(el("h1", "", "Realism survey"));
    box.appendChild(
      el(
        "p",
        "intro",
        "You will see one photograph at a time, labeled only with its crop. " +
          "Rate how realistic each image looks, from 1 (not at all) to 5 (extremely).",
      ),
    );
    if (notice) {
      box.appendChild(el("p", "notice", notice));
    }
    const label = el("label", "", "Your name or initials");
    label.setAttribute("for", "rater-label");
    const input = document.createElement("input");
    input.id = "rater-label";
    input.type = "text";
    input.autocomplete = "off";
    const message = el("p", "validation");
    message.id = "start-validation";
    const button = document.createElement("button");
    button.id = "start-button";
    button.textContent = "Start";
    button.addEventListener("click", () => {
      void this.openSession(input.value.trim(), message);
    });
    box.append(label, input, message, button);
    this.root.appendChild(box);
  }

  private renderItem(item: ItemView): void {
    this.current = item;
    this.root.replaceChildren();

    const panel = el("div", "panel rating-panel");
    const progress = el("p", "progress", `${item.position} of ${item.total}`);
    progress.id = "progress";
    panel.appendChild(progress);
    const category = el("h1", "category");
    category.id = "category";
    category.textContent = item.category;
    panel.appendChild(category);

    const image = document.createElement("img");
    image.id = "survey-image";
    image.src = item.image_url;
    image.alt = `photograph of ${item.category}`;
    panel.appendChild(image);

    panel.appendChild(el("p", "prompt", "How realistic does this image look?"));
    const buttons = el("div", "score-buttons");
    for (const [score, text] of SCORE_LABELS) {
      const button = document.createElement("button");
      button.className = "score-button";
      button.dataset.score = String(score);
      button.append(el("span", "score-number", String(score)), el("span", "score-text", text));
      button.addEventListener("click", () => {
        void this.submit(score);
      });
      buttons.appendChild(button);
    }
    panel.appendChild(buttons);
    panel.appendChild(el("p", "hint", "Keyboard: press 1-5"));
    this.root.appendChild(panel);
    window.addEventListener("keydown", this.onKeyDown);
  }

  private renderComplete(): void {
    this.dispose();
    this.current = null;
    this.root.replaceChildren();

    const panel = el("div", "panel complete-panel");
    panel.id = "complete";
    panel.appendChild(el("h1", "", "All done, thank you!"));
    panel.appendChild(el("p", "", "Every image has been rated. Your session id:"));
    const sid = el("code", "session-id", this.sessionId ?? "");
    sid.id = "session-id";
    panel.appendChild(sid);
    const reset = document.createElement("button");
    reset.id = "new-session";
    reset.textContent = "Start a new session";
    reset.addEventListener("click", () => {
      this.storage.removeItem(SESSION_STORAGE_KEY);
      this.renderStart();
    });
    panel.appendChild(reset);
    this.root.appendChild(panel);
  }

  private renderFailure(message: string, retry: () => void): void {
    const existing = this.root.querySelector("#failure-banner");
    existing?.remove();
    const banner = el("div", "banner");
    banner.id = "failure-banner";
    banner.appendChild(el("p", "", message));
    const button = document.createElement("button");
    button.id = "retry-button";
    button.textContent = "Retry";
    button.addEventListener("click", () => {
      banner.remove();
      retry();
    });
    banner.appendChild(button);
    this.root.prepend(banner);
  }

  // --- API flows -------------------------------------------------------

  private async openSession(raterLabel: string, message: HTMLElement): Promise<void> {
    if (!raterLabel) {
      message.textContent = "Please enter a name or initials first.";
      return;
    }
    message.textContent = "";
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}/api/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ rater_label: raterLabel }),
      });
    } catch {
      this.renderFailure("Cannot reach the survey service.", () => {
        void this.openSession(raterLabel, message);
      });
      return;
    }
    if (!response.ok) {
      this.renderFailure(`The service refused the session (HTTP ${response.status}).`, () => {
        void this.openSession(raterLabel, message);
      });
      return;
    }
    const session = (await response.json()) as SessionResponse;
    this.sessionId = session.session_id;
    this.storage.setItem(SESSION_STORAGE_KEY, session.session_id);
    await this.advance();
  }

  private async advance(): Promise<void> {
    if (!this.sessionId) {
      this.renderStart();
      return;
    }
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}/api/sessions/${this.sessionId}/next`);
    } catch {
      this.renderFailure("Cannot reach the survey service.", () => {
        void this.advance();
      });
      return;
    }
    if (response.status === 404) {
      // the server no longer knows this session; start over
      this.storage.removeItem(SESSION_STORAGE_KEY);
      this.renderStart("Your previous session expired; please start again.");
      return;
    }
    if (!response.ok) {
      this.renderFailure(`Unexpected service error (HTTP ${response.status}).`, () => {
        void this.advance();
      });
      return;
    }
    const body = (await response.json()) as NextResponse;
    if (body.done || !body.item) {
      this.renderComplete();
      return;
    }
    this.renderItem(body.item);
  }

  private async submit(score: number): Promise<void> {
    if (this.submitting || !this.current || !this.sessionId) {
      return;
    }
    this.submitting = true;
    this.setButtonsDisabled(true);
    const payload = {
      session_id: this.sessionId,
      item_id: this.current.item_id,
      score,
    };
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}/api/ratings`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch {
      // keep the rating; the retry button re-submits the same score
      this.submitting = false;
      this.renderFailure("Submission failed; your rating was kept.", () => {
        void this.submit(score);
      });
      return;
    }
    this.submitting = false;
    if (response.ok || response.status === 409) {
      // 409 = already rated: skip forward
      this.setButtonsDisabled(false);
      await this.advance();
      return;
    }
    this.setButtonsDisabled(false);
    this.renderFailure(`The service rejected the rating (HTTP ${response.status}).`, () => {
      void this.submit(score);
    });
  }

  private setButtonsDisabled(disabled: boolean): void {
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".score-button")) {
      button.disabled = disabled;
    }
  }
}

export function init(root: HTMLElement, options: AppOptions = {}): SurveyApp {
  const app = new SurveyApp(root, options);
  void app.start();
  return app;
}

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}
