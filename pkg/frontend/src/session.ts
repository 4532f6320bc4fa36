/**
 * Session identity: a random opaque token minted at page load.  No cookies,
 * no storage, no linkable identity; a reload is simply a new session.
 */
export function newSessionToken(): string {
  const bytes = new Uint8Array(16);
  globalThis.crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, '0')).join('');
}
