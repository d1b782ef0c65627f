/** At most one in-flight request per slot; superseded responses discarded. */

export class LatestGate<T> {
  private seq = 0;
  private inFlight = false;
  private pending: (() => Promise<T>) | null = null;
  private pendingKey = "";
  private currentKey = "";

  /**
   * Run `fn` for `key`, or queue it if a request is already in flight.
   * Resolves with null when a newer request superseded this one.
   */
  async submit(key: string, fn: () => Promise<T>): Promise<T | null> {
    if (this.inFlight) {
      this.pending = fn;
      this.pendingKey = key;
      return null;
    }
    return this.runNow(key, fn);
  }

  private async runNow(key: string, fn: () => Promise<T>): Promise<T | null> {
    const my = ++this.seq;
    this.inFlight = true;
    this.currentKey = key;
    try {
      const result = await fn();
      return my === this.seq ? result : null;
    } finally {
      this.inFlight = false;
      if (this.pending) {
        const nextFn = this.pending;
        const nextKey = this.pendingKey;
        this.pending = null;
        // fire and let the caller of the *next* submit observe the result via
        // onSettled; intermediate results are routed through the callback
        void this.runNow(nextKey, nextFn).then((r) => {
          if (r !== null && this.onSettled) this.onSettled(nextKey, r);
        });
      }
    }
  }

  /** Invoked for queued requests that complete after their submitter returned. */
  onSettled: ((key: string, result: T) => void) | null = null;

  /** True when `key` matches the most recent submission. */
  isCurrent(key: string): boolean {
    return key === this.currentKey && !this.pending;
  }
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, waitMs);
  };
}
