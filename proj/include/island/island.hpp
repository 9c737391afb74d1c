/**
 * Copyright 2026, the island-lst authors.
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
#ifndef ISLAND_ISLAND_HPP
#define ISLAND_ISLAND_HPP

#include "island/analytics.hpp"
#include "island/eval.hpp"
#include "island/fusion.hpp"
#include "island/geotiff.hpp"
#include "island/grid.hpp"
#include "island/insitu.hpp"
#include "island/manifest.hpp"
#include "island/parallel.hpp"
#include "island/qa.hpp"
#include "island/scene.hpp"
#include "island/spatial.hpp"
#include "island/temporal.hpp"

#endif  // ISLAND_ISLAND_HPP
