#!/usr/bin/env python3
"""Regenerate src/storylens/data/pos_lexicon.txt from the curated lists below.

The lexicon maps lowercase surface forms to one coarse class. Verb lemmas are
expanded to their inflected forms, nouns to plurals. Run from the repo root:

    python tools/build_pos_lexicon.py
"""

from pathlib import Path

# Adjectives (surface forms, no expansion).
ADJECTIVES = """
able absent afraid aged alive alone ancient angry anxious ashamed asleep awake
awful bad bare beautiful big bitter black bland blind blue bold bored boring
brave bright brilliant broad broken brown busy calm capable careful careless
charming cheap cheerful chilly clean clear clever cold comfortable common
cool courageous cowardly crazy crooked cross cruel curious cute damp dangerous
dark dead deaf dear decent deep delicate delicious dim dirty dismal dizzy
drowsy dry dull dusty eager early earnest easy elderly elegant empty enormous
envious equal evil excellent exhausted extraordinary faint fair faithful false
famous fancy fast fat feeble fierce filthy fine firm flat fond foolish
fortunate foul fragile frail frantic free fresh friendly frightened frozen
full funny furious gentle genuine ghastly giant glad gloomy glorious golden
good graceful gracious grand grave gray great greedy green grey grim guilty
handsome happy hard harsh haughty healthy heavy helpless hideous high hollow
holy homely honest horrible huge humble hungry icy idle ignorant ill immense
innocent insolent intelligent jealous jolly keen kind kindly large late lazy
lean light little lively lonely long loose loud lovely low loyal mad
magnificent mean meek merry mighty mild miserable modest naked narrow nasty
naughty near neat nervous new nice nimble noble noisy numb obedient oblivious
odd old orange pale passive patient peaceful peculiar perfect pink plain
pleasant plump polite poor precious pretty proper proud purple quaint queer
quick quiet rare raw ready red remarkable restless rich ripe rosy rotten
rough round royal rude sad safe scarce scarlet secret selfish sensible serene
severe shabby shallow sharp shiny short shrewd shy sick silent silly silver
simple sincere sleepy slender slight slim slow sly small smooth soft solemn
solid sore sorry sour splendid steady steep stern sticky stiff still stout
strange strict strong stubborn stupid sturdy submissive subtle sullen swift
sweet tall tame tattered tender terrible thick thin thirsty tidy tiny tired
tough tranquil true ugly uneasy unhappy unkind vacant vague vain vast vile
violent violet warm weak wealthy weary wet white whole wicked wide wild
wise witty wonderful wooden worn worthy wretched wrong yellow young
""".split()

# Verb lemmas with their inflected forms, one family per entry.
VERBS = """
accept accepts accepted accepting
agree agrees agreed agreeing
answer answers answered answering
appear appears appeared appearing
arrive arrives arrived arriving
ask asks asked asking
awaken awakens awakened awakening
bear bears bore borne bearing
beg begs begged begging
become becomes became becoming
begin begins began begun beginning
believe believes believed believing
belong belongs belonged belonging
bend bends bent bending
bind binds bound binding
bite bites bit bitten biting
blush blushes blushed blushing
bow bows bowed bowing
break breaks broke broken breaking
breathe breathes breathed breathing
bring brings brought bringing
build builds built building
burn burns burned burnt burning
burst bursts bursting
buy buys bought buying
call calls called calling
care cares cared caring
carry carries carried carrying
catch catches caught catching
change changes changed changing
chase chases chased chasing
cheer cheers cheered cheering
choose chooses chose chosen choosing
climb climbs climbed climbing
cling clings clung clinging
come comes came coming
command commands commanded commanding
cough coughs coughed coughing
count counts counted counting
crawl crawls crawled crawling
creep creeps crept creeping
cry cries cried crying
curtsy curtsies curtsied curtsying
dance dances danced dancing
dare dares dared daring
decide decides decided deciding
demand demands demanded demanding
depart departs departed departing
describe describes described describing
die dies died dying
dig digs dug digging
dine dines dined dining
draw draws drew drawn drawing
dream dreams dreamed dreamt dreaming
dress dresses dressed dressing
drink drinks drank drunk drinking
drive drives drove driven driving
drop drops dropped dropping
dwell dwells dwelt dwelling
eat eats ate eaten eating
echo echoes echoed echoing
embrace embraces embraced embracing
enter enters entered entering
escape escapes escaped escaping
explain explains explained explaining
fall falls fell fallen falling
fear fears feared fearing
feed feeds fed feeding
fetch fetches fetched fetching
fight fights fought fighting
find finds found finding
finish finishes finished finishing
fly flies flew flown flying
follow follows followed following
forget forgets forgot forgotten forgetting
forgive forgives forgave forgiven forgiving
frown frowns frowned frowning
gallop gallops galloped galloping
gather gathers gathered gathering
gaze gazes gazed gazing
give gives gave given giving
glance glances glanced glancing
go goes went gone going
grab grabs grabbed grabbing
feel feels felt feeling
greet greets greeted greeting
grieve grieves grieved grieving
grin grins grinned grinning
grow grows grew grown growing
guard guards guarded guarding
guess guesses guessed guessing
hang hangs hung hanging
happen happens happened happening
hate hates hated hating
hear hears heard hearing
help helps helped helping
hide hides hid hidden hiding
hit hits hitting
hold holds held holding
hope hopes hoped hoping
hurry hurries hurried hurrying
hurt hurts hurting
imagine imagines imagined imagining
invite invites invited inviting
jump jumps jumped jumping
keep keeps kept keeping
kill kills killed killing
kiss kisses kissed kissing
kneel kneels knelt kneeling
knock knocks knocked knocking
know knows knew known knowing
land lands landed landing
laugh laughs laughed laughing
lead leads led leading
lean leans leaned leant leaning
leap leaps leapt leaped leaping
learn learns learned learnt learning
leave leaves left leaving
lie lies lay lain lying
lift lifts lifted lifting
listen listens listened listening
look looks looked looking
live lives lived living
lock locks locked locking
long longs longed longing
lose loses lost losing
love loves loved loving
marry marries married marrying
meet meets met meeting
mourn mourns mourned mourning
move moves moved moving
murmur murmurs murmured murmuring
nod nods nodded nodding
notice notices noticed noticing
obey obeys obeyed obeying
offer offers offered offering
open opens opened opening
order orders ordered ordering
pause pauses paused pausing
pay pays paid paying
plead pleads pleaded pleading
point points pointed pointing
pray prays prayed praying
prepare prepares prepared preparing
promise promises promised promising
protect protects protected protecting
pull pulls pulled pulling
push pushes pushed pushing
put puts putting
question questions questioned questioning
race races raced racing
reach reaches reached reaching
read reads reading
refuse refuses refused refusing
remain remains remained remaining
remember remembers remembered remembering
reply replies replied replying
rescue rescues rescued rescuing
rest rests rested resting
retort retorts retorted retorting
return returns returned returning
ride rides rode ridden riding
ring rings rang rung ringing
rise rises risen rising
roar roars roared roaring
rule rules ruled ruling
run runs ran running
rush rushes rushed rushing
save saves saved saving
say says said saying
scream screams screamed screaming
see sees saw seen seeing
seek seeks sought seeking
seem seems seemed seeming
seize seizes seized seizing
sell sells sold selling
send sends sent sending
serve serves served serving
set sets setting
shake shakes shook shaken shaking
shine shines shone shining
shout shouts shouted shouting
show shows showed shown showing
shudder shudders shuddered shuddering
sigh sighs sighed sighing
sing sings sang sung singing
sink sinks sank sunk sinking
sit sits sat sitting
slay slays slew slain slaying
sleep sleeps slept sleeping
slip slips slipped slipping
smile smiles smiled smiling
sneer sneers sneered sneering
sob sobs sobbed sobbing
speak speaks spoke spoken speaking
spin spins spun spinning
spring springs sprang sprung springing
stand stands stood standing
stare stares stared staring
start starts started starting
stay stays stayed staying
steal steals stole stolen stealing
step steps stepped stepping
stop stops stopped stopping
stretch stretches stretched stretching
strike strikes struck striking
struggle struggles struggled struggling
stumble stumbles stumbled stumbling
suffer suffers suffered suffering
swear swears swore sworn swearing
sweep sweeps swept sweeping
swim swims swam swum swimming
take takes took taken taking
talk talks talked talking
teach teaches taught teaching
tear tears tore torn tearing
tell tells told telling
thank thanks thanked thanking
think thinks thought thinking
throw throws threw thrown throwing
touch touches touched touching
travel travels traveled travelled traveling travelling
tremble trembles trembled trembling
try tries tried trying
turn turns turned turning
understand understands understood understanding
vanish vanishes vanished vanishing
visit visits visited visiting
wait waits waited waiting
wake wakes woke woken waking
walk walks walked walking
wander wanders wandered wandering
want wants wanted wanting
warn warns warned warning
watch watches watched watching
wave waves waved waving
wear wears wore worn wearing
weep weeps wept weeping
whisper whispers whispered whispering
win wins won winning
wish wishes wished wishing
wonder wonders wondered wondering
work works worked working
worry worries worried worrying
write writes wrote written writing
yell yells yelled yelling
""".split()

# Noun lemmas; regular plurals are generated.
NOUNS = """
adventure afternoon air animal apple arm army aunt autumn baby ball banquet
barrel basket battle beach bear beast beauty bed bedroom bell bird birthday blanket
blood boat body book bottle box boy branch bread breakfast breath bride
bridge brother cake candle cap carriage castle cat cave cellar chair chamber chance chapel
child chimney church city cliff cloak cloud coach coat corner cottage country
courtyard cousin cow creature crowd crown cup curse dagger daughter day
demon desert dinner doctor dog door dragon dream dress duck eagle ear earth
evening eye face fairy family farm farmer father feast feather field finger
fire fish flame floor flower fog food foot forest fortune fountain fox friend
frog fruit garden gate gentleman ghost giant gift girl glass goat gold/
goose gown grandmother grass grave guard guest hair hall hand harbor hat
head heart hill home honey hood hoof horn horse hour house hunter husband
inn island jewel journey key king kingdom kiss kitchen knife knight lady
lake lamp land lane lantern leaf letter light lion lip log lord luck
maid maiden man manner marriage meadow meal merchant milk mirror moment money
monster moon morning mother mountain mouse mouth music name neck needle
neighbor nephew news niece night nose oak ocean ogre orchard owl palace
paper parent path peasant people piece pig place plan pond prayer prince
princess prison prisoner promise queen quest rabbit rain raven ribbon ring river
road robe rock roof room rope rose saddle sailor sea season secret servant shadow
sheep ship shoe shop shore shoulder silence silver sister sky sleep smile
snow soldier son song sorrow soul sound spell spindle spirit spring stable
staff stair star stone storm story stranger stream street summer sun supper
sword table tailor tale teacher tear thief thing thorn throne thunder time tongue
tooth tower town toy kettle treasure tree truth uncle valley village voice wall
wand war water wave way wedding week well wife wind window wine wing winter
wish witch wizard wolf woman wood word world year
""".replace("/", "").split()

IRREGULAR_PLURALS = {
    "child": "children",
    "foot": "feet",
    "goose": "geese",
    "man": "men",
    "mouse": "mice",
    "tooth": "teeth",
    "wolf": "wolves",
    "woman": "women",
    "leaf": "leaves",
    "knife": "knives",
    "wife": "wives",
    "thief": "thieves",
    "people": "people",
    "sheep": "sheep",
}


def plural(noun: str) -> str:
    if noun in IRREGULAR_PLURALS:
        return IRREGULAR_PLURALS[noun]
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    if noun.endswith("y") and noun[-2] not in "aeiou":
        return noun[:-1] + "ies"
    return noun + "s"


def main():
    entries: dict[str, str] = {}
    # Order matters: later assignments win, so list the dominant readings last.
    for word in NOUNS:
        entries[word] = "NOUN"
        entries[plural(word)] = "NOUN"
    for word in VERBS:
        entries[word] = "VERB"
    for word in ADJECTIVES:
        entries[word] = "ADJ"

    out = Path(__file__).resolve().parents[1] / "src" / "storylens" / "data" / "pos_lexicon.txt"
    lines = ["# pos_lexicon v1 (generated by tools/build_pos_lexicon.py)"]
    lines += [f"{w} {c}" for w, c in sorted(entries.items())]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(entries)} entries to {out}")


if __name__ == "__main__":
    main()
