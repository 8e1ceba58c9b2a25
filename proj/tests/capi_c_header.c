/*
 * Copyright 2026 The vbreath Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* The public header must compile as plain C. */
#include "vbreath/vbreath.h"

#include <stdio.h>
#include <string.h>

int main(void) {
  vb_model_options options;
  vb_signal_options signal;
  vb_signal_options_default(&signal);
  if (vb_model_options_default("gbc", &options) != VB_OK) return 1;
  if (options.n_estimators != 100 || options.threshold != 240) return 1;
  if (signal.sma_window != 5) return 1;
  if (vb_model_options_default("forest", &options) != VB_ERR_INVALID_ARGUMENT) return 1;
  if (strcmp(vb_status_name(VB_ERR_INVALID_ARGUMENT), "InvalidArgument") != 0) return 1;
  printf("vbreath %s\n", vb_version());
  return 0;
}
