#include <ltlkit/fuzz.hpp>
#include <ltlkit/parser.hpp>
#include <ltlkit/proof.hpp>
#include <ltlkit/proof_io.hpp>

#include <gtest/gtest.h>

using namespace ltlkit;

namespace
{

Formula C( std::string_view s ) { return parse_formula( s, Mode::caret ); }

std::string const fixtures = FIXTURE_DIR;

// Text-level expansion of CR, parsed afterwards.
std::string cr_text( long c, long m, long n, std::string const& f )
{
  if ( m == 0 && n == 0 )
    return "(int U (" + f + "))";
  std::string const down = m > 0 ? "(int U (call & X " + cr_text( c + 1, m - 1, n, f ) + "))" : "";
  std::string const up = n > 0 && ( c > 0 || m == 0 ) ? "(int U (ret & X " + cr_text( c - 1, m, n - 1, f ) + "))" : "";
  if ( down.empty() )
    return up;
  if ( up.empty() )
    return down;
  return "(" + down + " | " + up + ")";
}

ProofScript derivation() { return load_proof( fixtures + "/derivation_caret.prf" ); }

} // namespace

TEST( ExpandCr, Examples )
{
  auto const f = prop( "f" );
  EXPECT_EQ( expand_cr( 0, 0, 0, f ), C( "int U f" ) );
  EXPECT_EQ( expand_cr( 0, 1, 1, f ), C( "int U (call & X (int U (ret & X (int U f))))" ) );
  EXPECT_EQ( expand_cr( 1, 0, 1, f ), C( "int U (ret & X (int U f))" ) );
  EXPECT_THROW( expand_cr( 0, 0, 1, f ), proof_error );
}

TEST( ExpandCr, MatchesTextExpander )
{
  for ( long c = 0; c <= 2; ++c )
    for ( long m = 0; m <= 3; ++m )
      for ( long n = 0; n <= c + m && n <= 3; ++n )
        EXPECT_EQ( expand_cr( c, m, n, C( "p & X q" ) ), C( cr_text( c, m, n, "p & X q" ) ) ) << c << m << n;
}

TEST( Tautology, Examples )
{
  EXPECT_TRUE( check_tautology( C( "p -> p" ) ) );
  EXPECT_TRUE( check_tautology( C( "X p & (X p -> q) -> q" ) ) );
  EXPECT_FALSE( check_tautology( C( "X p -> p" ) ) );
  EXPECT_TRUE( check_tautology( C( "(p U q) | !(p U q)" ) ) );
  EXPECT_FALSE( check_tautology( C( "p U q -> q U p" ) ) );
  std::string big = "a0";
  for ( int i = 1; i < 21; ++i )
    big += " & a" + std::to_string( i );
  EXPECT_THROW( check_tautology( C( big ) ), tautology_cap_exceeded );
}

TEST( AxiomInstance, Examples )
{
  EXPECT_TRUE( check_axiom_instance( SystemId::ax_gen, "T3'", {}, { { "phi", C( "p" ) } }, C( "X p <-> (X false | N p)" ) ) );
  EXPECT_TRUE( check_axiom_instance( SystemId::ax_cr, "C1", {}, {},
                                     C( "(call & !ret & !int) | (!call & ret & !int) | (!call & !ret & int)" ) ) );
  EXPECT_TRUE( check_axiom_instance( SystemId::ax_cr, "C5", { { "n", 0 } }, { { "phi", C( "q" ) } },
                                     C( "call & X (int U (ret & q)) -> Na q" ) ) );
  EXPECT_TRUE( check_axiom_instance( SystemId::ax_cr, "C6", { { "m", 1 }, { "n", 0 } }, {},
                                     C( "call & X (int U (call & X (int U G !ret))) -> Xa false" ) ) );
  EXPECT_FALSE( check_axiom_instance( SystemId::ax_gen, "T1", {}, { { "phi", C( "p" ) }, { "psi", C( "q" ) } },
                                      C( "X p & X (p -> q) -> X p" ) ) );
}

TEST( AxiomInstance, Errors )
{
  EXPECT_THROW( check_axiom_instance( SystemId::ax, "T3'", {}, { { "phi", C( "p" ) } }, C( "p" ) ), proof_error );
  EXPECT_THROW( check_axiom_instance( SystemId::ax_gen, "T1", {}, { { "phi", C( "p" ) } }, C( "p" ) ), proof_error );
  EXPECT_THROW( check_axiom_instance( SystemId::ax_gen, "T3'", {}, { { "phi", C( "p" ) }, { "psi", C( "p" ) } }, C( "p" ) ),
                proof_error );
  EXPECT_THROW( check_axiom_instance( SystemId::ax_cr, "C5", { { "n", -1 } }, { { "phi", C( "p" ) } }, C( "p" ) ), proof_error );
  EXPECT_THROW( check_axiom_instance( SystemId::ax_cr, "C6", { { "m", 1 }, { "n", 1 } }, {}, C( "p" ) ), proof_error );
  EXPECT_THROW( check_axiom_instance( SystemId::ax_cr, "C2", { { "n", 1 } }, { { "phi", C( "p" ) } }, C( "p" ) ), proof_error );
}

TEST( AxiomInstance, DependsOnlyOnStructure )
{
  auto const a = check_axiom_instance( SystemId::ax_gen, "T2'", {}, { { "phi", C( "p" ) }, { "psi", C( "q" ) } },
                                       C( "p U q <-> q | (p & N (p U q))" ) );
  auto const b = check_axiom_instance( SystemId::ax_gen, "T2'", {}, { { "phi", prop( "p" ) }, { "psi", prop( "q" ) } },
                                       C( "(p U q) <-> (q | (p & N (p U q)))" ) );
  EXPECT_TRUE( a );
  EXPECT_EQ( a, b );
}

TEST( ListAxioms, Systems )
{
  auto ids = []( SystemId s ) {
    std::vector<std::string> out;
    for ( auto const& [id, _] : list_axioms( s ) )
      out.push_back( id );
    return out;
  };
  auto has = []( std::vector<std::string> const& v, std::string const& x ) {
    return std::find( v.begin(), v.end(), x ) != v.end();
  };
  auto const inf = ids( SystemId::ax_inf );
  EXPECT_TRUE( has( inf, "Inf" ) );
  EXPECT_FALSE( has( inf, "Fin" ) );
  auto const ax = ids( SystemId::ax );
  EXPECT_TRUE( has( ax, "T2" ) && has( ax, "T3" ) );
  EXPECT_FALSE( has( ax, "T2'" ) || has( ax, "T3'" ) );
  EXPECT_EQ( ids( SystemId::ax_cr ).size(), 19u );
  EXPECT_EQ( ids( SystemId::ax_fin ).size(), 8u );
}

TEST( CheckProof, BundledDerivation )
{
  auto const s = derivation();
  EXPECT_EQ( s.system, SystemId::ax_cr );
  EXPECT_EQ( s.steps.size(), 22u );
  auto const v = check_proof( s );
  EXPECT_TRUE( v.ok ) << v.step << ": " << v.reason;
  EXPECT_EQ( s.steps.back().formula, C( "!call & Xa false -> X ret" ) );
}

TEST( CheckProof, MutationsAreRejectedAtTheirStep )
{
  auto const s = derivation();
  std::vector<std::pair<std::size_t, Formula>> mutations;
  for ( std::size_t k = 0; k < s.steps.size(); ++k )
  {
    mutations.emplace_back( k, neg( s.steps[k].formula ) );
    mutations.emplace_back( k, conj( s.steps[k].formula, prop( "p" ) ) );
  }
  mutations.emplace_back( 17, C( "!X true" ) );
  mutations.emplace_back( 14, C( "X ret <-> (X false | !X ret)" ) );
  mutations.emplace_back( 0, C( "!call & X ret -> (X true <-> !Xa false)" ) );
  for ( auto const& [k, f] : mutations )
  {
    auto m = s;
    m.steps[k].formula = f;
    auto const v = check_proof( m );
    EXPECT_FALSE( v.ok ) << "step " << k + 1 << " -> " << to_string( f );
    EXPECT_EQ( v.step, k + 1 ) << v.reason;
  }
}

TEST( CheckProof, SmallScripts )
{
  EXPECT_TRUE( check_proof( parse_proof( "system: ax-cr\n1. true ; taut\n2. X true ; gen-x 1\n" ) ).ok );
  EXPECT_TRUE( check_proof( parse_proof( "system: ax-cr\n1. true ; taut\n2. Xa true ; gen-xa 1\n" ) ).ok );

  auto v = check_proof( parse_proof( "system: ax\n1. X true ; gen-x 2\n2. true ; taut\n" ) );
  EXPECT_FALSE( v.ok );
  EXPECT_EQ( v.step, 1u );

  v = check_proof( parse_proof( "system: ax\n1. !X false ; axiom Inf\n" ) );
  EXPECT_FALSE( v.ok );
  EXPECT_NE( v.reason.find( "not admissible" ), std::string::npos );

  EXPECT_THROW( parse_proof( "system: ax-gen\n1. true ; taut\n2. Xa true ; gen-xa 1\n" ), proof_format_error );
  v = check_proof( { SystemId::ax_gen, { { 1, truth(), Taut{} }, { 2, abs_weak_next( truth() ), GenAbsNext{ 1 } } } } );
  EXPECT_FALSE( v.ok );
  EXPECT_EQ( v.step, 2u );

  v = check_proof( parse_proof( "system: ax-gen\n1. true ; taut\n3. X true ; gen-x 1\n" ) );
  EXPECT_FALSE( v.ok );
  EXPECT_EQ( v.step, 3u );
}

TEST( CheckProof, InductionRule )
{
  // phi1 = (q & !q) makes the premise a tautology
  auto const good = "system: ax-gen\n"
                    "1. q & !q -> !r & X (q & !q) ; taut\n"
                    "2. q & !q -> !(s U r) ; ind-u 1\n";
  auto v = check_proof( parse_proof( good ) );
  EXPECT_TRUE( v.ok ) << v.reason;

  auto const bad = "system: ax-gen\n"
                   "1. q & !q -> !r & X (q & !q) ; taut\n"
                   "2. q & !q -> !(s U q) ; ind-u 1\n";
  v = check_proof( parse_proof( bad ) );
  EXPECT_FALSE( v.ok );
  EXPECT_EQ( v.step, 2u );

  auto const abstract = "system: ax-cr\n"
                        "1. q & !q -> !r & Xa (q & !q) ; taut\n"
                        "2. q & !q -> !(s Ua r) ; ind-ua 1\n";
  v = check_proof( parse_proof( abstract ) );
  EXPECT_TRUE( v.ok ) << v.reason;
}

TEST( ProofIo, ParsesJustifications )
{
  auto const s = parse_proof( "# c\nsystem: ax-cr\n"
                              "1. call & X (int U (ret & q)) -> Na q ; axiom C5 n=0 bind φ=q\n"
                              "2. p -> p ; axiom Prop\n" );
  ASSERT_EQ( s.steps.size(), 2u );
  auto const& a = std::get<AxiomInstance>( s.steps[0].justification );
  EXPECT_EQ( a.schema, "C5" );
  EXPECT_EQ( a.params.at( "n" ), 0 );
  EXPECT_EQ( a.bindings.at( "phi" ), C( "q" ) );
  EXPECT_TRUE( check_proof( s ).ok );
}

TEST( ProofIo, RejectsMalformedScripts )
{
  EXPECT_THROW( parse_proof( "1. p ; taut\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "system: ax-zz\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "system: ax\n1. p taut\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "system: ax\n1. p ; mp 1\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "system: ax\n1. p ; frobnicate\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "system: ax\n1. p & ; taut\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "system: ax\n1. Xa p ; taut\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "system: ax\n1. p ; axiom T3 bind phi=p bind phi=q\n" ), proof_format_error );
  EXPECT_THROW( parse_proof( "" ), proof_format_error );
}

TEST( CheckProof, AcceptedConclusionsAreValid )
{
  // every axiom instance is a one-step proof; its conclusion must hold on sampled traces
  for ( std::uint64_t s = 0; s < 200; ++s )
  {
    GenConfig cfg;
    cfg.seed = 600 + s;
    cfg.max_formula_size = 4;
    Generator g( cfg );
    Bindings const b{ { "phi", g.formula() }, { "psi", g.formula() } };
    auto const conclusion = instantiate_schema( "T2'", {}, b );
    ProofScript script{ SystemId::ax_gen, { { 1, conclusion, AxiomInstance{ "T2'", {}, b } } } };
    auto const v = check_proof( script );
    ASSERT_TRUE( v.ok ) << v.reason;
    ASSERT_TRUE( eval_everywhere( g.finite_trace(), conclusion ) );
    ASSERT_TRUE( eval_everywhere( g.lasso(), conclusion ) );
  }
}
