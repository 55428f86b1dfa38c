/** Upload view state: Start Validating is enabled only once a file is chosen. */

export class UploadState {
  private selected: File | null = null;

  select(file: File | null): void {
    this.selected = file;
  }

  get file(): File | null {
    return this.selected;
  }

  get canStart(): boolean {
    return this.selected !== null;
  }
}

/** Wire drag-and-drop plus the Browse input to a selection callback. */
export function wireDropZone(
  zone: HTMLElement,
  input: HTMLInputElement,
  onFile: (file: File) => void,
): void {
  zone.addEventListener("dragover", (event) => {
    event.preventDefault();
    zone.classList.add("dragover");
  });
  zone.addEventListener("dragleave", () => zone.classList.remove("dragover"));
  zone.addEventListener("drop", (event) => {
    event.preventDefault();
    zone.classList.remove("dragover");
    const file = event.dataTransfer?.files?.[0];
    if (file) onFile(file);
  });
  zone.addEventListener("click", () => input.click());
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (file) onFile(file);
  });
}
