/** Turning a /repair response into a downloadable file. */

export function decodeBase64(encoded: string): Uint8Array {
  if (typeof atob === "function") {
    const binary = atob(encoded);
    const bytes = new Uint8Array(binary.length);
    for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
    return bytes;
  }
  // node (tests)
  return new Uint8Array(Buffer.from(encoded, "base64"));
}

/** Download name convention: the original name plus a ".repaired" suffix. */
export function downloadName(originalName: string): string {
  return `${originalName}.repaired`;
}

export function mediaTypeFor(format: string): string {
  return format === "xlsx"
    ? "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"
    : "text/tab-separated-values";
}
