"""Interaktive Auswahl der vorkonfigurierten Experimente.

Das Skript zeigt die Einträge unter EXPERIMENTE aus der Konfigurationsdatei als Menü an und
führt den gewählten Eintrag über die Kommandozeile von toeplitz_tau aus.

Hauptkomponenten:
- sicherer_aufruf: Führt ein Experiment aus und behandelt Fehler
- zeige_menue_und_waehle: Zeigt das Menü und verarbeitet die Benutzerauswahl
- alle_tabellen: Führt alle Tabellen-Experimente nacheinander aus

Verwendung:
    python experimentauswahl.py [--config PFAD_ZUR_CONFIG]

Version: 1.0
Datum: 19.10.2026
"""

import argparse
import logging
from typing import Callable, Dict, List, Optional, Union

from toeplitz_tau.cli import EXIT_OK
from toeplitz_tau.cli import main as cli_main
from toeplitz_tau.config import LOG_DATEFMT, LOG_FORMAT, load_config

logger = logging.getLogger(__name__)

CommandType = Union[Callable[[], None], List[str]]
BefehlsEintrag = Dict[str, Union[str, CommandType]]


def sicherer_aufruf(argumente: List[str]) -> bool:
    """
    Führt ein Experiment aus und fängt bekannte sowie unerwartete Fehler.

    Args:
        argumente (List[str]): Argumente für die Kommandozeile, z.B. ["table", "--theta", "1"]

    Returns:
        bool: True, wenn das Experiment mit Exit-Code 0 endete, sonst False.
    """
    logger.info("Starte Experiment: %s", " ".join(argumente))
    try:
        code = cli_main(argumente)
    except SystemExit as e:
        logger.error("Ungültige Argumente für das Experiment: %s", e)
        return False
    except MemoryError as e:
        logger.error("Nicht genug Speicher: %s", e)
        return False
    except Exception as e:
        logger.error("Ein unerwarteter Fehler ist aufgetreten: %s", e)
        return False
    if code != EXIT_OK:
        logger.error("Experiment beendet mit Exit-Code %d", code)
    return code == EXIT_OK


def baue_befehle(experimente: Dict[str, List[str]]) -> Dict[str, BefehlsEintrag]:
    """Nummeriert die Experimente und ergänzt den Kombi-Eintrag für alle Tabellen."""
    befehle: Dict[str, BefehlsEintrag] = {
        str(i): {"name": name, "command": argumente}
        for i, (name, argumente) in enumerate(experimente.items(), start=1)
    }
    tabellen = [a for a in experimente.values() if a and a[0] == "table"]
    if tabellen:

        def alle_tabellen() -> None:
            for argumente in tabellen:
                if not sicherer_aufruf(argumente):
                    logger.error("Abbruch der Sequenz bei: %s", " ".join(argumente))
                    return
            logger.info("Alle Tabellen erstellt.")

        befehle[str(len(befehle) + 1)] = {"name": "Kombi: alle Tabellen", "command": alle_tabellen}
    return befehle


def zeige_menue_und_waehle(befehle: Dict[str, BefehlsEintrag]) -> Optional[str]:
    """
    Zeigt das Menü und gibt die Auswahl des Benutzers zurück.

    Returns:
        Optional[str]: Die Auswahl des Benutzers oder None, wenn 'q' gewählt wurde.
    """
    print("\nBitte wählen Sie ein Experiment aus:\n")
    for key, value in befehle.items():
        print(f"{key}. {value['name']}")
    auswahl = input("\nNummer des Experiments oder 'q' zum Beenden: ")
    return None if auswahl.strip() == "q" else auswahl.strip()


def pause() -> None:
    """Pausiert das Skript, bis der Benutzer fortfährt."""
    input("\nDrücken Sie Enter, um fortzufahren...")


def fuehre_befehl_aus(befehl: Union[str, CommandType]) -> None:
    if callable(befehl):
        befehl()
    elif isinstance(befehl, list):
        sicherer_aufruf(befehl)
    else:
        logger.error("Ungültiger Befehlstyp: %s", type(befehl))


def main() -> None:
    parser = argparse.ArgumentParser(description="Interaktive Auswahl der Experimente.")
    parser.add_argument("--config", default="config.yaml", help="Pfad zur Konfigurationsdatei")
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, datefmt=LOG_DATEFMT)
    config = load_config(args.config)
    if not config.experimente:
        logger.warning("Keine Experimente in %s konfiguriert", args.config)
        return
    befehle = baue_befehle(
        {name: a + ["--config", args.config] for name, a in config.experimente.items()}
    )

    while True:
        auswahl = zeige_menue_und_waehle(befehle)
        if auswahl is None:
            break
        if auswahl in befehle:
            logger.info("=" * 50)
            fuehre_befehl_aus(befehle[auswahl]["command"])
            logger.info("=" * 50)
            pause()
        else:
            logger.warning("Ungültige Auswahl. Bitte erneut versuchen.")


if __name__ == "__main__":
    main()
