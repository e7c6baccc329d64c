/** Annotation form model: the three verdicts plus free-form notes. */

import { Annotation } from "./protocol.js";

export interface AnnotationFormState {
  executable: boolean | null;
  clear: boolean | null;
  reachable: boolean | null;
  notes: string;
}

export function emptyForm(): AnnotationFormState {
  return { executable: null, clear: null, reachable: null, notes: "" };
}

export function formComplete(form: AnnotationFormState): boolean {
  return (
    typeof form.executable === "boolean" &&
    typeof form.clear === "boolean" &&
    typeof form.reachable === "boolean"
  );
}

export function toAnnotation(form: AnnotationFormState): Annotation {
  if (!formComplete(form)) {
    throw new Error("all three verdicts are required before submitting");
  }
  return {
    executable: form.executable as boolean,
    clear: form.clear as boolean,
    reachable: form.reachable as boolean,
    notes: form.notes,
  };
}
