/* tslint:disable */
/* eslint-disable */

/**
 * Success probability per iteration for the matched phase and for `phi = pi`.
 */
export class Amplification {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Matched-phase probabilities after 0..=iterations iterations.
     */
    readonly exact: Float64Array;
    /**
     * Standard Grover probabilities over twice as many iterations.
     */
    readonly grover: Float64Array;
    readonly iterations: number;
    readonly phi: number;
}

export function amplification(n: number, m: number): Amplification;

/**
 * Complexity report for `(m, N, delta)` as a JSON string.
 */
export function report(m: number, n: number, delta: number): string;

export function runsVsDelta(m: number, delta_min: number, delta_max: number, points: number, log: boolean): Float64Array;

export function runsVsMarked(delta: number, m_max: number, stride: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_amplification_free: (a: number, b: number) => void;
    readonly amplification: (a: number, b: number) => [number, number, number];
    readonly amplification_exact: (a: number) => [number, number];
    readonly amplification_grover: (a: number) => [number, number];
    readonly amplification_iterations: (a: number) => number;
    readonly amplification_phi: (a: number) => number;
    readonly report: (a: number, b: number, c: number) => [number, number, number, number];
    readonly runsVsDelta: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly runsVsMarked: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
