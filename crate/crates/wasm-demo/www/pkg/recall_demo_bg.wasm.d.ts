/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_amplification_free: (a: number, b: number) => void;
export const amplification: (a: number, b: number) => [number, number, number];
export const amplification_exact: (a: number) => [number, number];
export const amplification_grover: (a: number) => [number, number];
export const amplification_iterations: (a: number) => number;
export const amplification_phi: (a: number) => number;
export const report: (a: number, b: number, c: number) => [number, number, number, number];
export const runsVsDelta: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const runsVsMarked: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
