#include <map>
#include <stdexcept>

#include "tw/runner.hpp"

namespace tw::runner {

namespace {

struct CatalogEntry {
    const char* id;
    const char* description;
    const char* spec_json;
};

// Parameter conventions: time units with hbar = 1 throughout; amplitudes may
// be [re, im] pairs. The xx scenarios pin J = B = 1, system states
// f = g = 1/sqrt(2) and l = sqrt(3/7), m = sqrt(4/7).
const CatalogEntry kCatalog[] = {
    {"fig2a",
     "xx chain, Werner(1) environment versus product reference",
     R"({"id":"fig2a","family":"xx","case":"werner_vs_product",
        "params":{"alpha":1,"J":1,"B":1,"f":0.7071067811865476,"g":0.7071067811865476,
                  "l":0.6546536707079771,"m":0.7559289460184544},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig2b",
     "xx chain, Werner(0.6) environment versus product reference",
     R"({"id":"fig2b","family":"xx","case":"werner_vs_product",
        "params":{"alpha":0.6,"J":1,"B":1,"f":0.7071067811865476,"g":0.7071067811865476,
                  "l":0.6546536707079771,"m":0.7559289460184544},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig2c",
     "xx chain, Werner(0.2) environment versus product reference",
     R"({"id":"fig2c","family":"xx","case":"werner_vs_product",
        "params":{"alpha":0.2,"J":1,"B":1,"f":0.7071067811865476,"g":0.7071067811865476,
                  "l":0.6546536707079771,"m":0.7559289460184544},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig2d",
     "xx chain, uncorrelated environments on both sides (no witness growth)",
     R"({"id":"fig2d","family":"xx","case":"werner_vs_product",
        "params":{"alpha":0,"J":1,"B":1,"f":0.7071067811865476,"g":0.7071067811865476,
                  "l":0.6546536707079771,"m":0.7559289460184544},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig3a",
     "xx chain, Werner(1) versus Werner(0.6) environments",
     R"({"id":"fig3a","family":"xx","case":"werner_vs_werner",
        "params":{"alpha1":1,"alpha2":0.6,"J":1,"B":1,"f":0.7071067811865476,
                  "g":0.7071067811865476,"l":0.6546536707079771,"m":0.7559289460184544},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig3b",
     "xx chain, Werner(1) versus classically correlated environments",
     R"({"id":"fig3b","family":"xx","case":"werner_vs_classical",
        "params":{"alpha":1,"J":1,"B":1,"f":0.7071067811865476,"g":0.7071067811865476,
                  "l":0.6546536707079771,"m":0.7559289460184544},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig4a",
     "two atom-field pairs, entangled Fock environments versus their marginal product "
     "(n=1, detuning 0.1)",
     R"({"id":"fig4a","family":"jc","case":"entangled_vs_product",
        "params":{"g":1,"Delta":0.1,"n":1,"alpha":0.7071067811865476,
                  "beta":0.7071067811865476},
        "grid":{"tStart":0,"tEnd":40,"points":1600},
        "outputs":["D","sigma","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig4b",
     "two atom-field pairs, entangled versus classically correlated Fock environments "
     "(n=7, resonant)",
     R"({"id":"fig4b","family":"jc","case":"entangled_vs_classical",
        "params":{"g":1,"Delta":0,"n":7,"alpha":0.7071067811865476,
                  "beta":0.7071067811865476},
        "grid":{"tStart":0,"tEnd":20,"points":2000},
        "outputs":["D","sigma","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig4c",
     "two atom-field pairs, classically correlated Fock environments versus product "
     "(n=10, resonant)",
     R"({"id":"fig4c","family":"jc","case":"classical_vs_product",
        "params":{"g":1,"Delta":0,"n":10,"alpha":0.7071067811865476,
                  "beta":0.7071067811865476},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig4d",
     "two atom-field pairs, classically correlated Fock environments versus product "
     "(n=50, resonant)",
     R"({"id":"fig4d","family":"jc","case":"classical_vs_product",
        "params":{"g":1,"Delta":0,"n":50,"alpha":0.7071067811865476,
                  "beta":0.7071067811865476},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","sigma","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig5a",
     "two atom-field pairs, anticorrelated coherent mixture versus its marginal product "
     "(mean photon number 100)",
     R"({"id":"fig5a","family":"jc","case":"coherent",
        "params":{"g":1,"Delta":0,"beta":10},
        "grid":{"tStart":0,"tEnd":50,"points":2000},
        "outputs":["D","sigma","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig5b",
     "two atom-field pairs, anticorrelated coherent mixture versus its marginal product "
     "(mean photon number 200)",
     R"({"id":"fig5b","family":"jc","case":"coherent",
        "params":{"g":1,"Delta":0,"beta":14.142135623730951},
        "grid":{"tStart":0,"tEnd":50,"points":2000},
        "outputs":["D","sigma","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
    {"fig6a",
     "two amplitude-damping channels, entangled reservoir excitation versus product "
     "(gamma/lambda = 1000, oscillatory local dynamics)",
     R"({"id":"fig6a","family":"ad","case":"bell_vs_product",
        "params":{"gamma":1000,"lambda":1},
        "grid":{"tStart":0,"tEnd":10,"points":1000},
        "outputs":["D","sigma","I","bound10"]})"},
    {"fig6b",
     "two amplitude-damping channels, entangled reservoir excitation versus product "
     "(gamma/lambda = 0.1, monotone local dynamics)",
     R"({"id":"fig6b","family":"ad","case":"bell_vs_product",
        "params":{"gamma":0.1,"lambda":1},
        "grid":{"tStart":0,"tEnd":10,"points":1000},
        "outputs":["D","sigma","I","bound10"]})"},
    {"fig7a",
     "photon polarization dephasing, anticorrelated frequencies (K=-1), equal Bell-state "
     "polarizations",
     R"({"id":"fig7a","family":"photon","case":"correlated_vs_uncorrelated",
        "params":{"K":-1,"C11":1,"omega0":1,"dn":1,
                  "a1":0.7071067811865476,"b1":0,"c1":0,"d1":0.7071067811865476,
                  "a2":0.7071067811865476,"b2":0,"c2":0,"d2":0.7071067811865476},
        "grid":{"tStart":0,"tEnd":6,"points":600},
        "outputs":["D","sigma","I","bound10"]})"},
    {"fig7b",
     "photon polarization dephasing, anticorrelated frequencies (K=-1), distinct "
     "polarization states",
     R"({"id":"fig7b","family":"photon","case":"correlated_vs_uncorrelated",
        "params":{"K":-1,"C11":1,"omega0":1,"dn":1,
                  "a1":0.7071067811865476,"b1":0,"c1":0,"d1":0.7071067811865476,
                  "a2":0.9428090415820634,"b2":0,"c2":0,"d2":0.3333333333333333},
        "grid":{"tStart":0,"tEnd":6,"points":600},
        "outputs":["D","sigma","I","bound10"]})"},
    {"gate-pure",
     "four-qubit gate model, entangled pure environment pair versus marginal product; "
     "the gate fires once after the first grid point",
     R"({"id":"gate-pure","family":"gate","case":"pure_entangled",
        "params":{"a":0.7071067811865476,"b":0.7071067811865476,
                  "alpha":0.7071067811865476,"beta":0.7071067811865476},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
    {"gate-classical",
     "four-qubit gate model, classically correlated environment pair versus marginal "
     "product; the gate fires once after the first grid point",
     R"({"id":"gate-classical","family":"gate","case":"classical_mixture",
        "params":{"a":0.7071067811865476,"b":0.7071067811865476,
                  "alpha":0.7071067811865476,"beta":0.7071067811865476},
        "grid":{"tStart":0,"tEnd":20,"points":400},
        "outputs":["D","I","bound5","bound8","bound9","bound10","iInt","iExt"]})"},
};

const CatalogEntry* find_entry(const std::string& id) {
    for (const auto& e : kCatalog)
        if (id == e.id) return &e;
    return nullptr;
}

}  // namespace

std::vector<std::string> catalog_ids() {
    std::vector<std::string> ids;
    for (const auto& e : kCatalog) ids.push_back(e.id);
    return ids;
}

ScenarioSpec catalog_scenario(const std::string& id) {
    const CatalogEntry* e = find_entry(id);
    if (!e) throw SchemaError("unknown catalog id '" + id + "'");
    return load_scenario(e->spec_json);
}

std::string describe_line(const std::string& id) {
    const CatalogEntry* e = find_entry(id);
    if (!e) throw SchemaError("unknown catalog id '" + id + "'");
    return e->description;
}

std::string describe(const std::string& id) {
    const CatalogEntry* e = find_entry(id);
    if (!e) throw SchemaError("unknown catalog id '" + id + "'");
    return std::string(e->description) + "\n" + scenario_to_json(catalog_scenario(id));
}

}  // namespace tw::runner
