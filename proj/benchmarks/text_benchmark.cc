// Copyright 2026 The cojudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <string>

#include "benchmark/benchmark.h"
#include "cojudge/codebleu.h"
#include "cojudge/edit_distance.h"

namespace {

std::string RandomText(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string s(n, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng() % 26);
  return s;
}

void BM_Levenshtein(benchmark::State& state) {
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const a = RandomText(n, 1);
  auto const b = RandomText(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cojudge::Levenshtein(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Levenshtein)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

constexpr char kCandidate[] =
    "#include <bits/stdc++.h>\nusing namespace std;\nint main(){int n;cin>>n;"
    "vector<long long> a(n);for(auto&x:a)cin>>x;sort(a.begin(),a.end());"
    "long long s=0;for(int i=0;i<n;i++){if(i%2==0)s+=a[i];else s-=a[i];}"
    "cout<<s<<endl;return 0;}";
constexpr char kReference[] =
    "#include <bits/stdc++.h>\nusing namespace std;\nint main(){int n;cin>>n;"
    "vector<long long> v(n);for(int i=0;i<n;i++)cin>>v[i];sort(v.rbegin(),v.rend());"
    "long long r=0;for(int i=0;i<n;i+=2)r+=v[i];for(int i=1;i<n;i+=2)r-=v[i];"
    "cout<<r<<'\\n';}";

void BM_CodeBleu(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(cojudge::CodeBleu(kCandidate, kReference, "GNU C++17"));
  }
}
BENCHMARK(BM_CodeBleu);

void BM_Tokenize(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(cojudge::TokenizeCode(kReference, cojudge::Grammar::kCpp));
  }
}
BENCHMARK(BM_Tokenize);

}  // namespace
BENCHMARK_MAIN();
