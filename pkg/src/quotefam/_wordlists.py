"""Bundled default word lists.

STOPWORDS is the default English stop-word list used by normalization.
COMMON_WORDS extends it with frequent content words; the union backs the
heuristic English-language test used when filtering families.  Both lists
can be overridden with user-supplied files.
"""

STOPWORDS = frozenset("""
a about above after again against all am an and any are aren't as at be
because been before being below between both but by can cannot can't could
couldn't did didn't do does doesn't doing don't down during each few for from
further had hadn't has hasn't have haven't having he he'd he'll he's her here
here's hers herself him himself his how how's i i'd i'll i'm i've if in into
is isn't it it's its itself let's me more most mustn't my myself no nor not of
off on once only or other ought our ours ourselves out over own same shan't
she she'd she'll she's should shouldn't so some such than that that's the
their theirs them themselves then there there's these they they'd they'll
they're they've this those through to too under until up very was wasn't we
we'd we'll we're we've were weren't what what's when when's where where's
which while who who's whom why why's will with won't would wouldn't you you'd
you'll you're you've your yours yourself yourselves
""".split())

COMMON_WORDS = frozenset("""
able act add afraid age ago agree ahead air allow almost alone along already
also always america american among amount anger announce another answer
anyone anything appear ask attack away back bad bank become begin behind
believe best better big bill bit black blue body book both break bring
brother budget build business buy call campaign candidate car care carry case
catch cause center certain chance change charge check child children choice
choose church citizen city claim class clear close come comment committee
common community company concern congress consider continue control cost
country county couple course court cover create crisis cut day deal debate
decide decision deep defense democrat democratic department deserve die
difference different difficult director discuss district doctor dollar done
door doubt draw dream drive drop early earth easy eat economic economy effort
eight either election else end enough even evening event ever every everybody
everyone everything exactly expect experience explain face fact fail fair
faith fall family far fast father fear federal feel fight figure final
finally financial find fine fire first five focus follow food foot force
foreign forget form forward four free friend front full fund future gain game
general get girl give go god good govern government governor great ground
group grow guy half hand happen hard head health hear heart help high history
hit hold home hope hour house huge human hundred husband idea important
include increase indeed industry information instead interest international
involve issue job join judge just keep key kid kill kind know land large last
late later law lead leader learn least leave left less letter level lie life
light like likely line list listen little live local long look lose loss lot
love low main major make man many market matter may maybe mean measure media
meet member mention message might military million mind minute miss moment
money month morning mother move movement much must name nation national need
never new news next night nine nobody north nothing now number offer office
officer official often oil old one open order others outside page parent part
party pass past pay peace people percent person phone place plan play point
police policy political poor position possible power president press pretty
price private probably problem process program promise protect prove provide
public push put question quite race raise rather reach read real really
reason receive recent record red reform remain remember report republican
respect respond rest result return right rise risk road role room rule run
safe save say school sea season seat second security see seem sell senate
senator send sense serious serve service set seven several share shoot short
show side sign simple simply since sister sit situation six small social
society soldier somebody someone something son soon sort sound south speak
special spend stand start state statement stay step still stop story street
strong student stuff subject succeed success support sure system take talk
tax teach team tell ten term thank thing think third thousand threat three
time today together tomorrow tonight top toward town trade treatment trouble
true trust truth try turn two understand union unite united use value victory
view violence visit vote voter wait walk want war watch water way weapon week
well west white whole wife win wish woman women word work worker world worry
write wrong year yes yet young
""".split())

ENGLISH_WORDS = STOPWORDS | COMMON_WORDS
